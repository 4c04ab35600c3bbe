"""SU(2) irreps and fuzzy-sphere coordinates ``X_i = k J_i``."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

MAX_DIM = 1024

# Unit radius with textbook spin-j generators needs k = 2/sqrt(n^2 - 1).
# The alternative normalization k = 1/sqrt(n^2 - 1) only gives unit radius
# for generators scaled by 2 (Pauli matrices at n = 2).
K_CONVENTION_NOTE = (
    "k = 2/sqrt(n^2-1) with spin-j generators J_i (J_i = sigma_i/2 at n=2); "
    "equivalent to k = 1/sqrt(n^2-1) applied to 2*J_i, and reproduces "
    "X_i = sigma_i/sqrt(3) at n=2"
)


class FuzzySphereError(ValueError):
    pass


def _check_dim(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise FuzzySphereError(f"dimension must be an integer, got {n!r}")
    if n < 2:
        raise FuzzySphereError(f"dimension must be >= 2, got {n}")
    if n > MAX_DIM:
        raise FuzzySphereError(f"dimension capped at {MAX_DIM}, got {n}")


@dataclass(frozen=True)
class Su2Irrep:
    n: int
    j1: np.ndarray
    j2: np.ndarray
    j3: np.ndarray

    @property
    def spin(self) -> float:
        return (self.n - 1) / 2

    @property
    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.j1, self.j2, self.j3

    def casimir(self) -> np.ndarray:
        return sum(j @ j for j in self.generators)

    def hermiticity_deviation(self) -> float:
        return max(float(np.max(np.abs(j - j.conj().T))) for j in self.generators)


@dataclass(frozen=True)
class FuzzyCoordinates:
    n: int
    k: float
    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray

    @property
    def coordinates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.x1, self.x2, self.x3

    def radius_deviation(self) -> float:
        r2 = sum(x @ x for x in self.coordinates)
        return float(np.max(np.abs(r2 - np.eye(self.n))))


def build_irrep(n: int) -> Su2Irrep:
    """Spin ``(n-1)/2`` generators in the ``|j, m>`` basis, ``m`` descending."""
    _check_dim(n)
    j = (n - 1) / 2
    m = j - np.arange(n)
    # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)), on the superdiagonal
    jplus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jminus = jplus.conj().T
    irrep = Su2Irrep(
        n,
        (jplus + jminus) / 2,
        (jplus - jminus) / 2j,
        np.diag(m).astype(complex),
    )
    dev = max(check_commutators(irrep), irrep.hermiticity_deviation())
    if dev > 1e-12:
        raise FuzzySphereError(f"irrep n={n} fails su(2) relations by {dev:.3e}")
    return irrep


def noncommutativity(n: int) -> float:
    _check_dim(n)
    return 2.0 / math.sqrt(n * n - 1)


def fuzzy_coordinates(n: int) -> FuzzyCoordinates:
    irrep = build_irrep(n)
    k = noncommutativity(n)
    return FuzzyCoordinates(n, k, k * irrep.j1, k * irrep.j2, k * irrep.j3)


def check_commutators(irrep: Su2Irrep) -> float:
    """Largest entry of ``[J_a, J_b] - i J_c`` over the cyclic triples."""
    j = irrep.generators
    worst = 0.0
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        comm = j[a] @ j[b] - j[b] @ j[a]
        worst = max(worst, float(np.max(np.abs(comm - 1j * j[c]))))
    return worst


def cell_count(num_qubits: int) -> int:
    """Elementary cells of the fuzzy sphere for an N-qubit register."""
    if num_qubits < 1:
        raise FuzzySphereError(f"need at least one qubit, got {num_qubits}")
    cells = 1 << num_qubits
    if cells > sys.maxsize:
        raise OverflowError(f"2**{num_qubits} exceeds the platform integer range")
    return cells


def pauli_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    )
