"""Dense matrix realizations of the three ladder algebras.

Matrices are plain complex numpy arrays (row-major, index = occupation
number starting at 0).  Three representations share one interface:

- oscillator: a|n> = sqrt(n)|n-1>, a+|n> = sqrt(n+1)|n+1>, N|n> = n|n>
- su(1,1), Bargmann index K > 0 (infinite-dimensional, truncated):
      K+|n> = sqrt((n+1)(2K+n))|n+1>,  K3|n> = (K+n)|n>
- su(2), spin J with 2J a positive integer (exact, dimension 2J+1):
      J+|n> = sqrt((n+1)(2J-n))|n+1>,  J3|n> = (-J+n)|n>

For the truncated algebras the defect of every operator identity lives
in the last row/column only; spectral checks elsewhere in the package
therefore compare leading sub-blocks.

Tensor-product order is fixed: atom factor first, field factor second.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "AlgebraSpec",
    "oscillator",
    "su11",
    "su2",
    "LadderTriple",
    "build_ladder",
    "expm",
    "displacement_numeric",
    "kron",
    "max_abs",
    "max_abs_diff",
    "is_hermitian",
    "is_unitary",
]

OSCILLATOR = "oscillator"
SU11 = "su11"
SU2 = "su2"


@dataclass(frozen=True)
class AlgebraSpec:
    """Which ladder representation to use, plus its parameter.

    ``bargmann_k`` is the su(1,1) Bargmann index K (> 0); ``spin_2j`` is
    twice the su(2) spin (>= 1), fixing the dimension to spin_2j + 1.
    The oscillator carries no parameter.
    """

    kind: str
    bargmann_k: float | None = None
    spin_2j: int | None = None

    def __post_init__(self):
        if self.kind not in (OSCILLATOR, SU11, SU2):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == SU11:
            if self.bargmann_k is None or not self.bargmann_k > 0:
                raise ValueError("su11 requires bargmann_k > 0")
        elif self.bargmann_k is not None:
            raise ValueError("bargmann_k only applies to su11")
        if self.kind == SU2:
            if self.spin_2j is None or self.spin_2j < 1:
                raise ValueError("su2 requires integer spin_2j >= 1")
        elif self.spin_2j is not None:
            raise ValueError("spin_2j only applies to su2")

    @property
    def finite_dim(self) -> int | None:
        """Exact dimension for su(2), None for the truncated algebras."""
        return None if self.kind != SU2 else self.spin_2j + 1


def oscillator() -> AlgebraSpec:
    return AlgebraSpec(OSCILLATOR)


def su11(bargmann_k: float) -> AlgebraSpec:
    return AlgebraSpec(SU11, bargmann_k=bargmann_k)


def su2(spin_2j: int) -> AlgebraSpec:
    return AlgebraSpec(SU2, spin_2j=spin_2j)


@dataclass(frozen=True)
class LadderTriple:
    """Raising/lowering/diagonal matrices of one representation.

    ``l_minus`` is the entrywise conjugate transpose of ``l_plus`` and
    ``l_3`` is real diagonal.  ``truncated`` is False only for su(2).
    """

    l_plus: np.ndarray
    l_minus: np.ndarray
    l_3: np.ndarray
    dim: int
    algebra: AlgebraSpec
    truncated: bool


def build_ladder(algebra: AlgebraSpec, dim: int) -> LadderTriple:
    """Construct the ladder triple on basis indices 0..dim-1.

    For su(2) the dimension is fixed by the spin: dim must equal
    spin_2j + 1 (and the top raising entry vanishes identically, so the
    matrices are exact).  For the other algebras the top row/column of
    l_plus is the truncation boundary.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    lp = np.zeros((dim, dim), dtype=complex)
    if algebra.kind == OSCILLATOR:
        for n in range(dim - 1):
            lp[n + 1, n] = math.sqrt(n + 1)
        diag = np.arange(dim, dtype=float)
        truncated = True
    elif algebra.kind == SU11:
        two_k = algebra.bargmann_k * 2.0
        for n in range(dim - 1):
            lp[n + 1, n] = math.sqrt((n + 1) * (two_k + n))
        diag = algebra.bargmann_k + np.arange(dim, dtype=float)
        truncated = True
    else:
        if dim != algebra.spin_2j + 1:
            raise ValueError(
                f"su2 with spin_2j={algebra.spin_2j} requires dim "
                f"{algebra.spin_2j + 1}, got {dim}"
            )
        two_j = algebra.spin_2j
        for n in range(dim - 1):
            lp[n + 1, n] = math.sqrt((n + 1) * (two_j - n))
        diag = -two_j / 2.0 + np.arange(dim, dtype=float)
        truncated = False
    l3 = np.diag(diag).astype(complex)
    return LadderTriple(lp, lp.conj().T, l3, dim, algebra, truncated)


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square complex matrix.

    Delegates to scipy's scaling-and-squaring Pade implementation, which
    stays well inside 1e-12 relative error for the norms used here.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def displacement_numeric(algebra: AlgebraSpec, dim: int, z: complex) -> np.ndarray:
    """exp(z L+ - conj(z) L-) evaluated numerically.

    This is the oracle for every closed-form matrix element: unitary up
    to truncation error (exactly unitary for su(2), where there is no
    truncation).
    """
    lt = build_ladder(algebra, dim)
    return expm(z * lt.l_plus - np.conj(z) * lt.l_minus)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, atom factor first."""
    return np.kron(a, b)


def max_abs(m: np.ndarray) -> float:
    """Max-entry norm."""
    return float(np.abs(m).max())


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return max_abs(np.asarray(a) - np.asarray(b))


def is_hermitian(m: np.ndarray, tol: float) -> bool:
    m = np.asarray(m)
    return max_abs(m - m.conj().T) <= tol


def is_unitary(m: np.ndarray, tol: float) -> bool:
    m = np.asarray(m)
    eye = np.eye(m.shape[0])
    return max_abs(m.conj().T @ m - eye) <= tol
