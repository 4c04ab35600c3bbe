"""Validated measurement and derivation scripts.

A measurement script::

    {"initial_state": {"a": 0.6, "b": 0.8},
     "seed": 7,
     "steps": [{"kind": "mirror", "alpha": "i", "phi": 0},
               {"kind": "project", "index": 0}]}

Step kinds: ``mirror``, ``liar``, ``dual-mirror`` (``alpha``, ``phi``),
``fuzzy`` (``rows``, or ``alpha``/``beta``/``phi``, or ``gate: "hadamard"``)
and ``project`` (``index`` 0/1, or omitted for a seeded random outcome).

A derivation script::

    {"profile": "G",
     "steps": [{"op": "axiom", "id": "mirror"},
               {"op": "rule", "name": "identity", "params": {"F": "A"}},
               {"op": "rule", "name": "and_left_1", "premises": [1], "params": {"G": "A^"}},
               {"op": "rule", "name": "cut", "premises": [0, 2]}]}

Ops: ``axiom`` (``id``), ``rule`` (``name``, ``premises``, ``params``),
``assume`` (``sequent``, received judgement) and ``collapse``
(``premises``: the two judgements ``|- F`` and ``|- F^``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import observer_logic as lg
from . import qubit_core as qc
from .formulas import FormulaSyntaxError, parse_formula, parse_sequent
from .serialize import (
    SerializationError,
    diagonal_from_json,
    matrix_from_json,
    parse_amplitude,
    state_from_json,
    state_to_json,
)


class ScriptError(ValueError):
    """Malformed or invalid script; ``step`` is the zero-based step index."""

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        where = f"step {step}: " if step is not None else ""
        super().__init__(where + message)
        self.step = step


class EngineError(RuntimeError):
    def __init__(self, message: str, step: Optional[int] = None, run: Optional[int] = None) -> None:
        where = ""
        if run is not None:
            where += f"run {run}, "
        if step is not None:
            where += f"step {step}: "
        super().__init__(where + message)
        self.step = step
        self.run = run
        self.cause_name = None


def snapshot(psi: qc.QubitState) -> dict:
    p0, p1 = psi.probabilities
    bloch = qc.bloch_coordinates(psi)
    return {
        "state": state_to_json(psi),
        "probabilities": [p0, p1],
        "bloch": {"theta": bloch.theta, "phi": bloch.phi},
    }


# --------------------------------------------------------------------------
# measurement scripts
# --------------------------------------------------------------------------

STEP_KINDS = ("mirror", "liar", "fuzzy", "project", "dual-mirror")


@dataclass(frozen=True)
class Step:
    kind: str
    operator: object = None
    index: Optional[int] = None


@dataclass(frozen=True)
class ScenarioScript:
    initial_state: qc.QubitState
    steps: tuple
    seed: int = 0


def _fuzzy_operator(spec: dict) -> qc.Unitary2:
    if spec.get("gate") is not None:
        if str(spec["gate"]).lower() != "hadamard":
            raise ValueError(f"unknown gate {spec['gate']!r}")
        return qc.HADAMARD
    if "rows" in spec:
        return qc.Unitary2(matrix_from_json(spec), float(spec.get("phi", 0.0)))
    alpha = parse_amplitude(spec.get("alpha", 1))
    beta = parse_amplitude(spec.get("beta", 0))
    return qc.Unitary2.from_alpha_beta(alpha, beta, float(spec.get("phi", 0.0)))


def parse_step(spec, k: int) -> Step:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScriptError("each step is an object with a 'kind'", k)
    kind = spec["kind"]
    if kind not in STEP_KINDS:
        raise ScriptError(f"unknown step kind {kind!r}; expected one of {', '.join(STEP_KINDS)}", k)
    try:
        if kind == "project":
            index = spec.get("index")
            if index is not None and index not in (0, 1):
                raise ValueError(f"index must be 0 or 1, got {index!r}")
            return Step(kind, index=index)
        if kind == "fuzzy":
            return Step(kind, _fuzzy_operator(spec))
        return Step(kind, diagonal_from_json({"alpha": spec.get("alpha", 1), "phi": spec.get("phi", 0.0)}))
    except (ValueError, TypeError) as exc:
        raise ScriptError(str(exc), k) from None


def parse_script(obj, seed: Optional[int] = None) -> ScenarioScript:
    if not isinstance(obj, dict):
        raise ScriptError("script must be a JSON object")
    if "initial_state" not in obj:
        raise ScriptError("script needs 'initial_state'")
    try:
        psi = state_from_json(obj["initial_state"])
    except (SerializationError, qc.QubitError) as exc:
        raise ScriptError(f"initial_state: {exc}") from None
    steps = obj.get("steps", [])
    if not isinstance(steps, list):
        raise ScriptError("'steps' must be a list")
    if seed is None:
        seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ScriptError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return ScenarioScript(psi, tuple(parse_step(s, k) for k, s in enumerate(steps)), seed)


def run_script(script: ScenarioScript) -> dict:
    rng = np.random.default_rng(script.seed)
    psi = script.initial_state
    records = []
    for k, step in enumerate(script.steps):
        entry: dict = {"index": k, "kind": step.kind}
        if step.kind == "mirror":
            psi = qc.mirror_measure(psi, step.operator)
        elif step.kind == "liar":
            psi = qc.liar_measure(psi, step.operator)
        elif step.kind == "dual-mirror":
            psi = qc.dual_basis_mirror(psi, step.operator)
        elif step.kind == "fuzzy":
            psi = qc.fuzzy_measure(psi, step.operator)
        else:
            if step.index is None:
                rec = qc.projective_measure(psi, rng)
            else:
                p = qc.project(psi, step.index)[1]
                if p == 0.0:
                    raise EngineError(f"outcome {step.index} has probability 0", k)
                rec = qc.MeasurementRecord(step.index, p, qc.basis_state(step.index))
            entry["outcome"] = rec.outcome
            entry["probability"] = rec.probability
            psi = rec.post_state
        entry.update(snapshot(psi))
        records.append(entry)
    return {
        "seed": script.seed,
        "initial": snapshot(script.initial_state),
        "steps": records,
        "final": snapshot(psi),
    }


# --------------------------------------------------------------------------
# derivation scripts
# --------------------------------------------------------------------------


def logic_profile(obj: dict, allow_cloning: bool = False) -> lg.ObserverProfile:
    name = obj.get("profile", "G")
    atom = obj.get("atom", "A")
    if name not in lg.PROFILE_RULES:
        raise ScriptError(f"unknown profile {name!r}; expected P, G or A")
    if not isinstance(atom, str) or not atom[:1].isupper():
        raise ScriptError(f"atom must be an uppercase identifier, got {atom!r}")
    if name == "P":
        return lg.insider_profile(atom, allow_cloning=allow_cloning)
    if name == "G":
        return lg.quantum_profile(atom, allow_cloning=allow_cloning)
    return lg.classical_profile()


def _check_logic_steps(steps) -> list:
    if not isinstance(steps, list):
        raise ScriptError("'steps' must be a list")
    for k, s in enumerate(steps):
        if not isinstance(s, dict) or s.get("op") not in ("axiom", "rule", "assume", "collapse"):
            raise ScriptError("op must be one of axiom, rule, assume, collapse", k)
        premises = s.get("premises", [])
        if not isinstance(premises, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) and 0 <= i < k for i in premises
        ):
            raise ScriptError("premises must list indices of earlier steps", k)
        if s["op"] == "axiom" and not isinstance(s.get("id"), str):
            raise ScriptError("axiom steps need an 'id'", k)
        if s["op"] == "rule" and s.get("name") not in lg.RULES:
            raise ScriptError(f"unknown rule {s.get('name')!r}", k)
        if s["op"] == "assume":
            try:
                parse_sequent(s.get("sequent", ""))
            except (FormulaSyntaxError, ValueError, AttributeError) as exc:
                raise ScriptError(f"bad sequent: {exc}", k) from None
        params = s.get("params", {})
        if not isinstance(params, dict):
            raise ScriptError("params must be an object", k)
        for key, text in params.items():
            try:
                parse_formula(text)
            except (FormulaSyntaxError, TypeError) as exc:
                raise ScriptError(f"parameter {key}: {exc}", k) from None
    return steps


def run_logic_script(obj, profile: lg.ObserverProfile, run: Optional[int] = None) -> dict:
    """Execute the steps against ``profile``; its ledger is shared across calls."""
    if not isinstance(obj, dict):
        raise ScriptError("script must be a JSON object")
    steps = _check_logic_steps(obj.get("steps", []))
    trees: list = []
    for k, s in enumerate(steps):
        premises = [trees[i] for i in s.get("premises", [])]
        try:
            if s["op"] == "axiom":
                tree = lg.use_axiom(profile, s["id"])
            elif s["op"] == "assume":
                tree = lg.premise_tree(parse_sequent(s["sequent"]), s.get("source", "received"))
            elif s["op"] == "collapse":
                tree = lg.classical_collapse(profile, premises)
            else:
                tree = lg.apply_rule(profile, s["name"], premises, **s.get("params", {}))
        except lg.LogicError as exc:
            err = EngineError(str(exc), k, run)
            err.cause_name = type(exc).__name__
            raise err from exc
        trees.append(tree)
    final = trees[-1] if trees else None
    return {
        "profile": profile.name,
        "conclusions": [str(t.conclusion) for t in trees],
        "tree": final.to_json() if final else None,
        "transcript": final.render() if final else "",
        "ledger": profile.ledger.snapshot(),
    }


def cut_scenario_script(atom: str = "A") -> dict:
    """The cut derivation written as a G script."""
    return {
        "profile": "G",
        "atom": atom,
        "steps": [
            {"op": "axiom", "id": "mirror"},
            {"op": "rule", "name": "identity", "params": {"F": atom}},
            {"op": "rule", "name": "and_left_1", "premises": [1], "params": {"G": atom + "^"}},
            {"op": "rule", "name": "cut", "premises": [0, 2]},
        ],
    }

