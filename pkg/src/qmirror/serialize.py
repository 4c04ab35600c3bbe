"""JSON forms of states and operators, and amplitude parsing.

States are ``{"a": [re, im], "b": [re, im]}``, diagonal unitaries
``{"alpha": [re, im], "phi": x}``, general matrices ``{"rows": [[z, z], [z, z]]}``
with each ``z`` a ``[re, im]`` pair.  Floats go through ``json`` unchanged, which
writes the shortest repr that reads back to the same double.
"""

from __future__ import annotations

import cmath
import math

from .qubit_core import DiagonalUnitary2, Mat2, QubitState, normalize


class SerializationError(ValueError):
    pass


def parse_amplitude(value) -> complex:
    """Accepts ``[re, im]``, a number, ``"re+imi"`` or polar ``"r@theta"``."""
    if isinstance(value, bool):
        raise SerializationError(f"not an amplitude: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
            raise SerializationError(f"amplitude pairs are [re, im], got {value!r}")
        return complex(value[0], value[1])
    if not isinstance(value, str):
        raise SerializationError(f"not an amplitude: {value!r}")
    text = value.strip()
    if "@" in text:
        r, _, theta = text.partition("@")
        try:
            return cmath.rect(float(r), float(theta))
        except ValueError:
            raise SerializationError(f"bad polar amplitude {value!r}") from None
    compact = text.replace(" ", "")
    if compact.endswith("i"):
        compact = compact[:-1] + "j"
    try:
        z = complex(compact)
    except ValueError:
        raise SerializationError(f"bad amplitude {value!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SerializationError(f"non-finite amplitude {value!r}")
    return z


def complex_to_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def state_to_json(psi: QubitState) -> dict:
    return {"a": complex_to_json(psi.a), "b": complex_to_json(psi.b)}


def state_from_json(obj, *, renormalize: bool = False) -> QubitState:
    if not isinstance(obj, dict) or set(obj) - {"a", "b", "normalize"} or not {"a", "b"} <= set(obj):
        raise SerializationError(f"state must be an object with keys a, b; got {obj!r}")
    a, b = parse_amplitude(obj["a"]), parse_amplitude(obj["b"])
    if renormalize or obj.get("normalize", False):
        return normalize(a, b)
    return QubitState(a, b)


def diagonal_to_json(u: DiagonalUnitary2) -> dict:
    return {"alpha": complex_to_json(u.alpha), "phi": u.phase}


def diagonal_from_json(obj) -> DiagonalUnitary2:
    if not isinstance(obj, dict) or "alpha" not in obj:
        raise SerializationError(f"diagonal unitary needs 'alpha'; got {obj!r}")
    phi = obj.get("phi", 0.0)
    if isinstance(phi, bool) or not isinstance(phi, (int, float)) or not math.isfinite(phi):
        raise SerializationError(f"phi must be a finite number, got {phi!r}")
    return DiagonalUnitary2(parse_amplitude(obj["alpha"]), float(phi))


def matrix_to_json(m: Mat2) -> dict:
    return {"rows": [[complex_to_json(z) for z in row] for row in m.rows]}


def matrix_from_json(obj) -> Mat2:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise SerializationError(f"matrix needs 'rows'; got {obj!r}")
    rows = obj["rows"]
    if not (isinstance(rows, list) and len(rows) == 2 and all(isinstance(r, list) and len(r) == 2 for r in rows)):
        raise SerializationError("rows must be a 2x2 nested list")
    return Mat2.from_rows([[parse_amplitude(z) for z in row] for row in rows])
