"""Single-qubit states and 2x2 operators.

Amplitudes are plain Python ``complex`` values.  Every value type here is an
immutable dataclass whose invariants are checked once, at construction.

The measurement family implemented on top of them:

* projective (standard) measurement with the projectors ``P0``/``P1``;
* mirror measurement, a diagonal unitary ``e^{i phi}(alpha P0 + alpha* P1)``
  which keeps both probabilities and is undone by its inverse;
* fuzzy measurement, a general 2x2 unitary that mixes the amplitudes;
* liar measurement, ``NOT`` after a diagonal unitary, which swaps the two
  probabilities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

NORM_TOL = 1e-12
DECOMPOSE_TOL = 1e-10

RngLike = Union[int, np.random.Generator]


class QubitError(ValueError):
    """Raised when a state or operator violates its construction invariant."""


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def _check_finite(*values: complex) -> None:
    for z in values:
        if not _finite(complex(z)):
            raise QubitError(f"non-finite entry {z!r}")


# --------------------------------------------------------------------------
# value types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QubitState:
    """Normalized ``a|0> + b|1>``."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        _check_finite(self.a, self.b)
        norm2 = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise QubitError(f"state not normalized: |a|^2+|b|^2 = {norm2!r}")

    @property
    def probabilities(self) -> tuple[float, float]:
        return abs(self.a) ** 2, abs(self.b) ** 2

    def as_vector(self) -> tuple[complex, complex]:
        return self.a, self.b

    def inner(self, other: QubitState) -> complex:
        """``<self|other>``."""
        return self.a.conjugate() * other.a + self.b.conjugate() * other.b


@dataclass(frozen=True)
class Mat2:
    """A 2x2 complex matrix, entries in row-major order."""

    e00: complex
    e01: complex
    e10: complex
    e11: complex

    def __post_init__(self) -> None:
        for name in ("e00", "e01", "e10", "e11"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _check_finite(self.e00, self.e01, self.e10, self.e11)

    @classmethod
    def from_rows(cls, rows) -> Mat2:
        (r0, r1) = rows
        return cls(r0[0], r0[1], r1[0], r1[1])

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, d0: complex, d1: complex) -> Mat2:
        return cls(d0, 0, 0, d1)

    @property
    def rows(self) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        return (self.e00, self.e01), (self.e10, self.e11)

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return self.e00, self.e01, self.e10, self.e11

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=complex)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.e00 * other.e00 + self.e01 * other.e10,
                self.e00 * other.e01 + self.e01 * other.e11,
                self.e10 * other.e00 + self.e11 * other.e10,
                self.e10 * other.e01 + self.e11 * other.e11,
            )
        x, y = other
        return (self.e00 * x + self.e01 * y, self.e10 * x + self.e11 * y)

    def __add__(self, other: Mat2) -> Mat2:
        return Mat2(*(p + q for p, q in zip(self.entries(), other.entries())))

    def __sub__(self, other: Mat2) -> Mat2:
        return Mat2(*(p - q for p, q in zip(self.entries(), other.entries())))

    def scale(self, c: complex) -> Mat2:
        return Mat2(*(c * e for e in self.entries()))

    def __rmul__(self, c) -> Mat2:
        return self.scale(c)

    def dagger(self) -> Mat2:
        return Mat2(
            self.e00.conjugate(),
            self.e10.conjugate(),
            self.e01.conjugate(),
            self.e11.conjugate(),
        )

    def det(self) -> complex:
        return self.e00 * self.e11 - self.e01 * self.e10

    def inverse(self) -> Mat2:
        d = self.det()
        if d == 0:
            raise QubitError("singular matrix")
        return Mat2(self.e11 / d, -self.e01 / d, -self.e10 / d, self.e00 / d)

    def max_abs_diff(self, other: Mat2) -> float:
        return max(abs(p - q) for p, q in zip(self.entries(), other.entries()))

    def is_close(self, other: Mat2, tol: float = NORM_TOL) -> bool:
        return self.max_abs_diff(other) <= tol

    def unitarity_residual(self) -> float:
        return (self.dagger() @ self).max_abs_diff(IDENTITY)


IDENTITY = Mat2.identity()
ZERO = Mat2(0, 0, 0, 0)
PAULI_X = Mat2(0, 1, 1, 0)
PAULI_Y = Mat2(0, -1j, 1j, 0)
PAULI_Z = Mat2(1, 0, 0, -1)
NOT = PAULI_X
_S = 1 / math.sqrt(2)
HADAMARD_MATRIX = Mat2(_S, _S, _S, -_S)


@dataclass(frozen=True)
class Unitary2:
    """``e^{i phase} m`` with ``m`` unitary.

    ``phase`` is kept separate so the SU(2)-style block
    ``[[alpha, beta], [-beta*, alpha*]]`` can be stored as given.
    """

    m: Mat2
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.phase):
            raise QubitError("non-finite phase")
        res = self.m.unitarity_residual()
        if res > NORM_TOL:
            raise QubitError(f"matrix is not unitary (residual {res:.3e})")

    @classmethod
    def from_alpha_beta(cls, alpha: complex, beta: complex, phase: float = 0.0) -> Unitary2:
        alpha, beta = complex(alpha), complex(beta)
        return cls(Mat2(alpha, beta, -beta.conjugate(), alpha.conjugate()), phase)

    @property
    def matrix(self) -> Mat2:
        return self.m.scale(cmath.exp(1j * self.phase))

    @property
    def alpha(self) -> complex:
        return self.m.e00

    @property
    def beta(self) -> complex:
        return self.m.e01

    def apply(self, psi: QubitState) -> QubitState:
        return QubitState(*(self.matrix @ psi.as_vector()))

    def inverse(self) -> Unitary2:
        return Unitary2(self.m.dagger(), -self.phase)


@dataclass(frozen=True)
class DiagonalUnitary2:
    """``e^{i phase} diag(alpha, alpha*)`` with ``|alpha| = 1``."""

    alpha: complex
    phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        _check_finite(self.alpha)
        if not math.isfinite(self.phase):
            raise QubitError("non-finite phase")
        if abs(abs(self.alpha) ** 2 - 1.0) > NORM_TOL:
            raise QubitError(f"|alpha| must be 1, got {abs(self.alpha)!r}")

    @property
    def matrix(self) -> Mat2:
        g = cmath.exp(1j * self.phase)
        return Mat2.diag(g * self.alpha, g * self.alpha.conjugate())

    def as_unitary(self) -> Unitary2:
        return Unitary2.from_alpha_beta(self.alpha, 0, self.phase)

    def inverse(self) -> DiagonalUnitary2:
        return DiagonalUnitary2(self.alpha.conjugate(), -self.phase)


@dataclass(frozen=True)
class Projector2:
    m: Mat2

    def __post_init__(self) -> None:
        if (self.m @ self.m).max_abs_diff(self.m) > NORM_TOL:
            raise QubitError("projector must be idempotent")
        if self.m.dagger().max_abs_diff(self.m) > NORM_TOL:
            raise QubitError("projector must be Hermitian")

    def apply(self, psi: QubitState) -> tuple[complex, complex]:
        return self.m @ psi.as_vector()


P0 = Projector2(Mat2(1, 0, 0, 0))
P1 = Projector2(Mat2(0, 0, 0, 1))
PROJECTORS = (P0, P1)

# |+><+| and |-><-| written out directly; the conjugation route
# H P0 H^-1 lives in dual_projectors().
P_PLUS = Projector2(Mat2(0.5, 0.5, 0.5, 0.5))
P_MINUS = Projector2(Mat2(0.5, -0.5, -0.5, 0.5))

# truth-value exchangers used by the liar measurement
Q0 = NOT @ P0.m
Q1 = NOT @ P1.m

HADAMARD = Unitary2(HADAMARD_MATRIX)


@dataclass(frozen=True)
class BlochPoint:
    theta: float
    phi: float

    def to_state(self) -> QubitState:
        return QubitState(
            math.cos(self.theta / 2),
            cmath.exp(1j * self.phi) * math.sin(self.theta / 2),
        )

    def cartesian(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    probability: float
    post_state: QubitState


class EulerAngles(NamedTuple):
    phi: float
    gamma: float
    theta: float
    delta: float

    def matrix(self) -> Mat2:
        """``e^{i phi} R_Z(gamma) R_Y(theta) R_Z(delta)``."""
        return (rz(self.gamma) @ ry(self.theta) @ rz(self.delta)).scale(
            cmath.exp(1j * self.phi)
        )


class PhaseShiftForm(NamedTuple):
    phi_prime: float
    lam: float

    def matrix(self) -> Mat2:
        return Mat2.diag(1, cmath.exp(1j * self.lam)).scale(cmath.exp(1j * self.phi_prime))


# --------------------------------------------------------------------------
# constructors and rotations
# --------------------------------------------------------------------------


def normalize(a: complex, b: complex) -> QubitState:
    a, b = complex(a), complex(b)
    _check_finite(a, b)
    norm = math.hypot(abs(a), abs(b))
    if norm == 0:
        raise QubitError("cannot normalize the zero vector")
    return QubitState(a / norm, b / norm)


def basis_state(i: int) -> QubitState:
    _check_index(i)
    return QubitState(1, 0) if i == 0 else QubitState(0, 1)


def rz(angle: float) -> Mat2:
    return Mat2.diag(cmath.exp(-0.5j * angle), cmath.exp(0.5j * angle))


def ry(angle: float) -> Mat2:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return Mat2(c, -s, s, c)


def _check_index(i: int) -> None:
    if i not in (0, 1):
        raise QubitError(f"basis index must be 0 or 1, got {i!r}")


def make_rng(rng: RngLike) -> np.random.Generator:
    """Seeded PCG64 generator (numpy ``default_rng``); generators pass through."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


# --------------------------------------------------------------------------
# measurements
# --------------------------------------------------------------------------


def project(psi: QubitState, i: int) -> tuple[tuple[complex, complex], float]:
    """Unnormalized ``P_i psi`` and its squared norm."""
    _check_index(i)
    vec = PROJECTORS[i].apply(psi)
    return vec, abs(vec[0]) ** 2 + abs(vec[1]) ** 2


def _collapse(psi: QubitState, i: int) -> MeasurementRecord:
    vec, p = project(psi, i)
    root = math.sqrt(p)
    return MeasurementRecord(i, p, QubitState(vec[0] / root, vec[1] / root))


def projective_measure(psi: QubitState, rng_seed: RngLike) -> MeasurementRecord:
    """Standard measurement in the computational basis.

    One uniform variate ``u`` in [0, 1) is drawn and outcome 0 is chosen iff
    ``u < p(0)``, so a zero-probability branch is never selected.
    """
    rng = make_rng(rng_seed)
    p0 = project(psi, 0)[1]
    outcome = 0 if rng.random() < p0 else 1
    return _collapse(psi, outcome)


def mirror_measure(psi: QubitState, u: DiagonalUnitary2) -> QubitState:
    g = cmath.exp(1j * u.phase)
    return QubitState(g * u.alpha * psi.a, g * u.alpha.conjugate() * psi.b)


def mirror_inverse(psi_prime: QubitState, u: DiagonalUnitary2) -> QubitState:
    return mirror_measure(psi_prime, u.inverse())


def liar_measure(psi: QubitState, u: DiagonalUnitary2) -> QubitState:
    """``NOT`` applied after the diagonal unitary ``u``."""
    g = cmath.exp(1j * u.phase)
    return QubitState(g * u.alpha.conjugate() * psi.b, g * u.alpha * psi.a)


def liar_matrix(u: DiagonalUnitary2) -> Mat2:
    return (u.alpha * Q0 + u.alpha.conjugate() * Q1).scale(cmath.exp(1j * u.phase))


def fuzzy_measure(psi: QubitState, u: Unitary2) -> QubitState:
    return u.apply(psi)


def projective_after_mirror(psi: QubitState, u: DiagonalUnitary2, i: int) -> MeasurementRecord:
    """Project the mirrored state on ``|i>``; the post-state is reported as ``|i>``
    itself, without the leftover global phase of ``P_i U psi / sqrt(p)``."""
    _check_index(i)
    p = project(mirror_measure(psi, u), i)[1]
    if p == 0.0:
        raise QubitError(f"outcome {i} has probability 0")
    return MeasurementRecord(i, p, basis_state(i))


def dual_basis_mirror(psi: QubitState, u: DiagonalUnitary2) -> QubitState:
    """Mirror measurement in the ``|+>, |->`` basis: ``H U H^-1``."""
    h = HADAMARD_MATRIX
    return QubitState(*((h @ u.matrix @ h.inverse()) @ psi.as_vector()))


def dual_projectors() -> tuple[Mat2, Mat2]:
    h = HADAMARD_MATRIX
    hinv = h.inverse()
    return h @ P0.m @ hinv, h @ P1.m @ hinv


def dual_mirror_superposition(u: DiagonalUnitary2) -> Mat2:
    """``e^{i phi}(alpha P+ + alpha* P-)`` from the explicit dual projectors."""
    return (u.alpha * P_PLUS.m + u.alpha.conjugate() * P_MINUS.m).scale(
        cmath.exp(1j * u.phase)
    )


# --------------------------------------------------------------------------
# geometry and decompositions
# --------------------------------------------------------------------------


def bloch_coordinates(psi: QubitState) -> BlochPoint:
    """``(theta, phi)`` with ``phi = 0`` at the poles."""
    ra, rb = abs(psi.a), abs(psi.b)
    theta = 2.0 * math.atan2(rb, ra)
    if ra <= NORM_TOL or rb <= NORM_TOL:
        return BlochPoint(0.0 if rb <= NORM_TOL else math.pi, 0.0)
    phi = (cmath.phase(psi.b) - cmath.phase(psi.a)) % (2 * math.pi)
    if phi >= 2 * math.pi:
        phi = 0.0
    return BlochPoint(theta, phi)


def euler_decompose(u: Unitary2) -> EulerAngles:
    """Angles with ``u = e^{i phi} R_Z(gamma) R_Y(theta) R_Z(delta)``.

    ``phi`` is half the argument of ``det u``, which puts the remaining factor
    in SU(2).  When ``theta = 0`` only ``gamma + delta`` is fixed and the split
    ``gamma = delta`` is used; when ``theta = pi`` ``delta`` is set to 0.
    """
    m = u.matrix
    phi = cmath.phase(m.det()) / 2.0
    v = m.scale(cmath.exp(-1j * phi))
    c, s = abs(v.e00), abs(v.e10)
    theta = 2.0 * math.atan2(s, c)
    if s <= DECOMPOSE_TOL * 1e-2:
        total = -2.0 * cmath.phase(v.e00)
        gamma = delta = total / 2.0
        theta = 0.0
    elif c <= DECOMPOSE_TOL * 1e-2:
        gamma, delta = 2.0 * cmath.phase(v.e10), 0.0
        theta = math.pi
    else:
        plus = -2.0 * cmath.phase(v.e00)
        minus = 2.0 * cmath.phase(v.e10)
        gamma, delta = (plus + minus) / 2.0, (plus - minus) / 2.0
    angles = EulerAngles(phi, gamma, theta, delta)
    # half-angle branches can leave an overall sign of -1; fold it into phi
    if angles.matrix().max_abs_diff(m) > angles.matrix().scale(-1).max_abs_diff(m):
        angles = angles._replace(phi=phi + math.pi)
    return angles


def phase_shift_form(u: DiagonalUnitary2) -> PhaseShiftForm:
    """``u = e^{i phi'} diag(1, e^{i lambda})``.

    With ``alpha = e^{-i delta}``: ``lambda = 2 delta`` and
    ``phi' = phi - delta``.
    """
    delta = -cmath.phase(u.alpha)
    return PhaseShiftForm(u.phase - delta, 2.0 * delta)


def diagonal_from_matrix(m: Mat2, tol: float = NORM_TOL) -> DiagonalUnitary2 | None:
    """Recover ``e^{i phi} diag(alpha, alpha*)`` from a diagonal unitary, else None."""
    if abs(m.e01) > tol or abs(m.e10) > tol:
        return None
    phase = (cmath.phase(m.e00) + cmath.phase(m.e11)) / 2.0
    alpha = m.e00 * cmath.exp(-1j * phase)
    return DiagonalUnitary2(alpha / abs(alpha), phase)


# --------------------------------------------------------------------------
# random sampling (property tests, border scenario)
# --------------------------------------------------------------------------


def random_state(rng: np.random.Generator) -> QubitState:
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return normalize(complex(z[0]), complex(z[1]))


def random_diagonal(rng: np.random.Generator) -> DiagonalUnitary2:
    return DiagonalUnitary2(
        cmath.exp(1j * rng.uniform(0, 2 * math.pi)), float(rng.uniform(0, 2 * math.pi))
    )


def random_unitary(rng: np.random.Generator) -> Unitary2:
    """Independent complex Gaussians for alpha, beta, rescaled onto the unit sphere."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z = z / np.linalg.norm(z)
    return Unitary2.from_alpha_beta(complex(z[0]), complex(z[1]), float(rng.uniform(0, 2 * math.pi)))
