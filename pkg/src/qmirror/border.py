"""End-to-end run of the black-box border, physical and logical side by side.

A supplies a classical bit, mapped to ``|bit>`` and then put in superposition
by a fixed Hadamard.  P mirror-measures it (alpha, phi drawn from the seed)
and issues the mirror axiom.  G measures projectively with the same seeded
generator, cuts the axiom down to the judgement matching her outcome and adds
her empirical excluded-middle / non-contradiction instances.  A receives
G's judgements and tries to reach ``_|_``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import observer_logic as lg
from . import qubit_core as qc
from .formulas import FALSUM, Sequent
from .scripts import snapshot
from .serialize import diagonal_to_json

FALSUM_SEQUENT = Sequent.of(None, FALSUM)


@lru_cache(maxsize=None)
def _classical_closure_has_falsum(hypotheses: tuple) -> bool:
    found = lg.search(lg.classical_profile(), hypotheses=hypotheses, targets=[FALSUM_SEQUENT])
    return FALSUM_SEQUENT in found


def run_border(bit: int = 0, seed: int = 0, *, allow_cloning: bool = False, atom: str = "A") -> dict:
    if bit not in (0, 1):
        raise ValueError(f"input bit must be 0 or 1, got {bit!r}")
    rng = np.random.default_rng(seed)
    lines: list[str] = []

    psi0 = qc.basis_state(bit)
    psi = qc.HADAMARD.apply(psi0)
    lines.append(f"A: classical input bit {bit} -> |{bit}>, Hadamard -> superposition")

    u = qc.random_diagonal(rng)
    mirrored = qc.mirror_measure(psi, u)
    lines.append(
        "P: mirror measurement, probabilities "
        f"{psi.probabilities[0]:.6f}/{psi.probabilities[1]:.6f} -> "
        f"{mirrored.probabilities[0]:.6f}/{mirrored.probabilities[1]:.6f}"
    )
    g = lg.quantum_profile(atom, allow_cloning=allow_cloning)
    lines.append(f"P: issues axiom {g.ledger.sequent('mirror')} "
                 f"({'reusable: cloning allowed' if allow_cloning else 'one use: no-cloning'})")

    record = qc.projective_measure(mirrored, rng)
    lines.append(f"G: projective measurement -> outcome {record.outcome} (p = {record.probability:.6f})")

    cut_tree = lg.derive_cut_scenario(g, complement=record.outcome == 1, atom=atom)
    lines.append(f"G: cut on the mirror axiom -> {cut_tree.conclusion}")
    empirical = lg.post_measurement_judgements(record.outcome, atom)
    lines.append("G: empirical judgements " + ", ".join(str(s) for s in empirical))

    g_trees = {"cut": cut_tree}
    g_contradiction = None
    second_use = None
    try:
        other = lg.derive_cut_scenario(g, complement=record.outcome == 0, atom=atom)
    except lg.AxiomExhausted as exc:
        second_use = str(exc)
        lines.append(f"G: second use of the mirror axiom refused: {exc}")
    else:
        pair = [cut_tree, other] if record.outcome == 0 else [other, cut_tree]
        g_contradiction = lg.apply_rule(g, "and_formation", pair)
        g_trees["second_cut"] = other
        g_trees["contradiction"] = g_contradiction
        lines.append(f"G: second cut -> {other.conclusion}; &-formation -> {g_contradiction.conclusion}")

    received = [cut_tree.conclusion, *empirical]
    a_falsum = None
    if g_contradiction is not None:
        a_falsum = lg.hand_to_classical(g_contradiction, atom=atom)
        received.append(g_contradiction.conclusion)
        lines.append(f"A: receives {g_contradiction.conclusion}, derives {a_falsum.conclusion}")
    lines.append("A: holds " + ", ".join(str(s) for s in received))
    searchable = _classical_closure_has_falsum(tuple(received))
    falsum_derived = a_falsum is not None or searchable
    lines.append(f"A: contradiction reachable by search (depth <= {lg.SEARCH_DEPTH}): {'yes' if searchable else 'no'}")

    table = lg.communication_table()
    for pair, ok in table.items():
        lines.append(f"{pair}: {'yes' if ok else 'no'}")

    return {
        "bit": bit,
        "seed": seed,
        "allow_cloning": allow_cloning,
        "atom": atom,
        "input": snapshot(psi0),
        "superposed": snapshot(psi),
        "mirror": {"operator": diagonal_to_json(u), **snapshot(mirrored)},
        "measurement": {"outcome": record.outcome, "probability": record.probability, **snapshot(record.post_state)},
        "g_derivations": {k: v.to_json() for k, v in g_trees.items()},
        "g_judgement": str(cut_tree.conclusion),
        "g_second_use": second_use,
        "empirical": [str(s) for s in empirical],
        "a_received": [str(s) for s in received],
        "a_falsum": a_falsum.to_json() if a_falsum else None,
        "falsum_derived": falsum_derived,
        "communication": table,
        "transcript": lines,
    }
