"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 engine error.
With ``--json`` results and errors are printed to stdout as JSON (sorted
keys, so identical inputs give byte-identical output).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fuzzy_sphere as fs
from . import observer_logic as lg
from . import qubit_core as qc
from .border import run_border
from .scripts import (
    EngineError,
    ScriptError,
    logic_profile,
    parse_script,
    run_logic_script,
    run_script,
)
from .serialize import (
    SerializationError,
    diagonal_from_json,
    matrix_from_json,
    matrix_to_json,
    parse_amplitude,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_ENGINE = 0, 1, 2, 3
DEFAULT_DISPLAY_TOL = 1e-12


class UsageError(Exception):
    pass


class ValidationError(Exception):
    def __init__(self, message: str, **extra) -> None:
        super().__init__(message)
        self.extra = extra


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError("tolerance must be a finite non-negative number")
    return value


BORDER_HELP = """\
Run the black-box border scheme end to end.

The classical input bit from A becomes |0> or |1> and a fixed Hadamard puts
it in superposition before P acts.  P mirror-measures (alpha and phi drawn
from --seed) and issues the axiom |- A & A^ once; G measures projectively,
cuts the axiom down to |- A or |- A^ and adds the empirical judgements; A
receives them.  With --allow-cloning the axiom is reusable: G rebuilds
|- A & A^ and A derives _|_.
"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--tolerance",
        type=_tolerance,
        default=DEFAULT_DISPLAY_TOL,
        help="print magnitudes below this as 0 in text output (display only)",
    )

    parser = _Parser(prog="qmirror", description="Reversible single-qubit measurements and observer logics.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("simulate", parents=[common], help="run a measurement script")
    p.add_argument("script", help="JSON script path, or - for stdin")
    p.add_argument("--seed", type=_u64, help="override the script's seed")

    p = sub.add_parser("decompose", parents=[common], help="Euler and phase-shift forms of a 2x2 unitary")
    p.add_argument(
        "matrix",
        help='inline JSON or a path: {"rows": [[z, z], [z, z]]} or {"alpha": z, "phi": x}; '
        'z is [re, im], "re+imi" or "r@theta"',
    )

    p = sub.add_parser("fuzzy", parents=[common], help="SU(2) irrep and fuzzy-sphere coordinates")
    p.add_argument("n", type=int, help=f"dimension, 2..{fs.MAX_DIM}")

    p = sub.add_parser("logic", parents=[common], help="run a derivation script")
    p.add_argument("script", help="JSON script path, or - for stdin")
    p.add_argument("--allow-cloning", action="store_true", help="make the axioms reusable")
    p.add_argument("--repeat", type=int, default=1, help="run the script N times on one ledger")

    p = sub.add_parser(
        "border",
        parents=[common],
        help="end-to-end border scenario",
        description=BORDER_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--bit", type=int, choices=(0, 1), default=0, help="classical input bit")
    p.add_argument("--allow-cloning", action="store_true", help="let P issue the axiom more than once")
    return parser


# -- helpers ----------------------------------------------------------------


def _load_json(source: str):
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}: invalid JSON: {exc}") from None


def _num(x: float, tol: float) -> str:
    return "0" if abs(x) < tol else f"{x:.12g}"


def _cnum(z: complex, tol: float) -> str:
    re_, im = (0.0 if abs(z.real) < tol else z.real), (0.0 if abs(z.imag) < tol else z.imag)
    if im == 0:
        return f"{re_:.12g}"
    if re_ == 0:
        return f"{im:.12g}i"
    return f"{re_:.12g}{'+' if im >= 0 else '-'}{abs(im):.12g}i"


def _state_text(snap: dict, tol: float) -> str:
    a = complex(*snap["state"]["a"])
    b = complex(*snap["state"]["b"])
    p0, p1 = snap["probabilities"]
    return f"({_cnum(a, tol)}, {_cnum(b, tol)})  p = [{_num(p0, tol)}, {_num(p1, tol)}]"


def _matrix_text(m, tol: float, indent: str = "  ") -> list[str]:
    return [indent + "[" + "  ".join(f"{_cnum(complex(z), tol):>22}" for z in row) + "]" for row in m]


# -- commands ---------------------------------------------------------------


def cmd_simulate(args) -> tuple[dict, list[str]]:
    try:
        script = parse_script(_load_json(args.script), seed=args.seed)
    except ScriptError as exc:
        raise ValidationError(str(exc), step=exc.step) from None
    report = run_script(script)
    tol = args.tolerance
    lines = [f"seed {report['seed']}", f"initial  {_state_text(report['initial'], tol)}"]
    for step in report["steps"]:
        extra = ""
        if "outcome" in step:
            extra = f"  outcome {step['outcome']} with probability {_num(step['probability'], tol)}"
        lines.append(f"[{step['index']}] {step['kind']:<11} {_state_text(step, tol)}{extra}")
    lines.append(f"final    {_state_text(report['final'], tol)}")
    return report, lines


def _decompose_input(source: str):
    text = source.strip()
    obj = None
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid inline JSON: {exc}") from None
    else:
        obj = _load_json(source)
    try:
        if isinstance(obj, dict) and "alpha" in obj:
            d = diagonal_from_json(obj)
            return d.matrix, d
        return matrix_from_json(obj), None
    except (SerializationError, qc.QubitError) as exc:
        raise ValidationError(str(exc)) from None


def cmd_decompose(args) -> tuple[dict, list[str]]:
    m, diag = _decompose_input(args.matrix)
    residual = m.unitarity_residual()
    if residual > qc.NORM_TOL:
        raise ValidationError(f"matrix is not unitary (residual {residual:.3e})", residual=residual)
    u = qc.Unitary2(m)
    angles = qc.euler_decompose(u)
    recon = angles.matrix().max_abs_diff(m)
    report: dict = {
        "matrix": matrix_to_json(m),
        "euler": angles._asdict(),
        "residual": recon,
        "unitarity_residual": residual,
    }
    if diag is None:
        diag = qc.diagonal_from_matrix(m)
    if diag is not None:
        shift = qc.phase_shift_form(diag)
        report["phase_shift"] = {
            "phi_prime": shift.phi_prime,
            "lambda": shift.lam,
            "alpha": [diag.alpha.real, diag.alpha.imag],
            "phi": diag.phase,
            "delta": -math.atan2(diag.alpha.imag, diag.alpha.real),
            "residual": shift.matrix().max_abs_diff(m),
        }
    tol = args.tolerance
    lines = ["matrix"] + _matrix_text(m.rows, tol)
    lines.append(
        "e^{i phi} Rz(gamma) Ry(theta) Rz(delta): "
        + ", ".join(f"{k} = {_num(v, tol)}" for k, v in angles._asdict().items())
    )
    lines.append(f"reconstruction residual {recon:.3e}")
    if "phase_shift" in report:
        ps = report["phase_shift"]
        lines.append(
            f"phase shift e^{{i phi'}} diag(1, e^{{i lambda}}): phi' = {_num(ps['phi_prime'], tol)}, "
            f"lambda = {_num(ps['lambda'], tol)}  (residual {ps['residual']:.3e})"
        )
    return report, lines


def cmd_fuzzy(args) -> tuple[dict, list[str]]:
    n = args.n
    if not 2 <= n <= fs.MAX_DIM:
        raise ValidationError(f"n must be in 2..{fs.MAX_DIM}, got {n}")
    irrep = fs.build_irrep(n)
    coords = fs.fuzzy_coordinates(n)

    def rows(a):
        return [[[z.real, z.imag] for z in row] for row in a.tolist()]

    report = {
        "n": n,
        "k": coords.k,
        "spin": irrep.spin,
        "J": [rows(j) for j in irrep.generators],
        "X": [rows(x) for x in coords.coordinates],
        "commutator_deviation": fs.check_commutators(irrep),
        "radius_deviation": coords.radius_deviation(),
        "k_convention": fs.K_CONVENTION_NOTE,
    }
    tol = args.tolerance
    lines = [f"n = {n}, spin j = {irrep.spin:g}, k = {coords.k:.17g}", f"note: {fs.K_CONVENTION_NOTE}"]
    if n <= 8:
        for name, mats in (("J", irrep.generators), ("X", coords.coordinates)):
            for i, mat in enumerate(mats, 1):
                lines.append(f"{name}{i} =")
                lines.extend(_matrix_text(mat.tolist(), tol))
    else:
        lines.append("(matrices omitted for n > 8; use --json)")
    lines.append(f"max |[J_i, J_j] - i eps_ijk J_k| = {report['commutator_deviation']:.3e}")
    lines.append(f"max |X1^2 + X2^2 + X3^2 - I| = {report['radius_deviation']:.3e}")
    return report, lines


def cmd_logic(args) -> tuple[dict, list[str]]:
    obj = _load_json(args.script)
    if args.repeat < 1:
        raise UsageError("--repeat must be at least 1")
    try:
        if not isinstance(obj, dict):
            raise ScriptError("script must be a JSON object")
        profile = logic_profile(obj, allow_cloning=args.allow_cloning)
        runs = [run_logic_script(obj, profile, run=r if args.repeat > 1 else None) for r in range(args.repeat)]
    except ScriptError as exc:
        raise ValidationError(str(exc), step=exc.step) from None
    report = {"profile": profile.name, "runs": runs, "ledger": profile.ledger.snapshot()}
    lines = []
    for r, run in enumerate(runs):
        if args.repeat > 1:
            lines.append(f"run {r}")
        lines.extend(run["transcript"].splitlines())
    lines.append("ledger:")
    for axiom_id, entry in report["ledger"].items():
        note = f"  ({entry['note']})" if "note" in entry else ""
        lines.append(f"  {axiom_id}: {entry['sequent']}  remaining {entry['remaining']}{note}")
    return report, lines


def cmd_border(args) -> tuple[dict, list[str]]:
    report = run_border(args.bit, args.seed, allow_cloning=args.allow_cloning)
    return report, list(report["transcript"])


COMMANDS = {
    "simulate": cmd_simulate,
    "decompose": cmd_decompose,
    "fuzzy": cmd_fuzzy,
    "logic": cmd_logic,
    "border": cmd_border,
}


def _emit_error(kind: str, message: str, as_json: bool, **extra) -> None:
    if as_json:
        payload = {"error": {"kind": kind, "message": message, **{k: v for k, v in extra.items() if v is not None}}}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"error: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        report, lines = COMMANDS[args.command](args)
    except UsageError as exc:
        _emit_error("usage", str(exc), as_json)
        return EXIT_USAGE
    except ValidationError as exc:
        _emit_error("validation", str(exc), as_json, **exc.extra)
        return EXIT_VALIDATION
    except EngineError as exc:
        _emit_error("engine", str(exc), as_json, step=exc.step, run=exc.run, cause=exc.cause_name)
        return EXIT_ENGINE
    except (lg.LogicError, qc.QubitError, fs.FuzzySphereError) as exc:
        _emit_error("engine", str(exc), as_json, cause=type(exc).__name__)
        return EXIT_ENGINE
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
