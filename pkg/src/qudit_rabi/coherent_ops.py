"""Closed-form matrix elements of the coherent-type operators.

For each algebra the unitary exp(z L+ - conj(z) L-) has matrix elements
in closed form.  They are expressed through a mapped parameter kappa:

- oscillator: kappa = z, elements built from associated Laguerre
  polynomials of |z|^2;
- su(1,1):    kappa = sinh(|z|)/|z| * z, elements built from f_su11;
- su(2):      kappa = sin(|z|)/|z| * z, elements built from f_su2.

Each family has two index branches (row below/above column); both agree
on the diagonal.  ``oracle_check`` compares a whole index block against
the numerically exponentiated operator and reruns at doubled dimension
to flag truncation problems.

Factorial-ratio prefactors are evaluated in log space, so indices up to
roughly 150 are usable before the auxiliary sums themselves overflow.
"""

import math
from dataclasses import dataclass

from .fock_algebra import OSCILLATOR, SU11, SU2, AlgebraSpec, displacement_numeric
from .special_functions import f_su11, f_su2, laguerre_assoc

__all__ = [
    "CoherentParameter",
    "coherent_parameter",
    "kappa_oscillator",
    "kappa_su11",
    "kappa_su2",
    "matelem_u",
    "matelem_v",
    "matelem_w",
    "matelem",
    "OracleReport",
    "oracle_check",
]

# Below this |z| the sinh/sin ratios are evaluated by series; the next
# omitted term is O(|z|^4) ~ 1e-24, far below double precision.
_SMALL_Z = 1e-6


def kappa_oscillator(z: complex) -> complex:
    return complex(z)


def kappa_su11(z: complex) -> complex:
    z = complex(z)
    az = abs(z)
    if az < _SMALL_Z:
        return z * (1.0 + az * az / 6.0)
    return z * (math.sinh(az) / az)


def kappa_su2(z: complex) -> complex:
    z = complex(z)
    az = abs(z)
    if az < _SMALL_Z:
        return z * (1.0 - az * az / 6.0)
    return z * (math.sin(az) / az)


@dataclass(frozen=True)
class CoherentParameter:
    """Displacement argument z together with its mapped kappa."""

    z: complex
    kappa: complex
    algebra: AlgebraSpec


def coherent_parameter(algebra: AlgebraSpec, z: complex) -> CoherentParameter:
    if algebra.kind == OSCILLATOR:
        kap = kappa_oscillator(z)
    elif algebra.kind == SU11:
        kap = kappa_su11(z)
    else:
        kap = kappa_su2(z)
    return CoherentParameter(complex(z), kap, algebra)


def _check_result(value: complex) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError("matrix element overflowed the floating-point range")
    return value


def _lpoch(a: float, n: int) -> float:
    # log (a)_n for a > 0
    return math.lgamma(a + n) - math.lgamma(a)


# --- oscillator -------------------------------------------------------------

def _u_row_le(n: int, m: int, z: complex) -> complex:
    az2 = abs(z) ** 2
    radial = math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1)) - 0.5 * az2)
    return (-z.conjugate()) ** (m - n) * radial * laguerre_assoc(n, m - n, az2)


def _u_row_ge(n: int, m: int, z: complex) -> complex:
    az2 = abs(z) ** 2
    radial = math.exp(0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1)) - 0.5 * az2)
    return z ** (n - m) * radial * laguerre_assoc(m, n - m, az2)


def matelem_u(n: int, m: int, z: complex) -> complex:
    """<n| exp(z a+ - conj(z) a) |m> for the oscillator."""
    if n < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    z = complex(z)
    if n <= m:
        return _check_result(_u_row_le(n, m, z))
    return _check_result(_u_row_ge(n, m, z))


# --- su(1,1) ----------------------------------------------------------------

def _v_radial(bargmann_k: float, n: int, m: int, ak2: float) -> float:
    two_k = 2.0 * bargmann_k
    log_pref = 0.5 * (
        math.lgamma(n + 1)
        + math.lgamma(m + 1)
        - _lpoch(two_k, n)
        - _lpoch(two_k, m)
    )
    return math.exp(log_pref + (-bargmann_k - (n + m) / 2.0) * math.log1p(ak2))


def _v_row_le(bargmann_k: float, n: int, m: int, kap: complex) -> complex:
    ak2 = abs(kap) ** 2
    radial = _v_radial(bargmann_k, n, m, ak2)
    return (-kap.conjugate()) ** (m - n) * radial * f_su11(n, m - n, ak2, 2.0 * bargmann_k)


def _v_row_ge(bargmann_k: float, n: int, m: int, kap: complex) -> complex:
    ak2 = abs(kap) ** 2
    radial = _v_radial(bargmann_k, n, m, ak2)
    return kap ** (n - m) * radial * f_su11(m, n - m, ak2, 2.0 * bargmann_k)


def matelem_v(bargmann_k: float, n: int, m: int, z: complex) -> complex:
    """<K,n| exp(z K+ - conj(z) K-) |K,m> for su(1,1) with index K."""
    if not bargmann_k > 0:
        raise ValueError("bargmann_k must be positive")
    if n < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    kap = kappa_su11(z)
    if n <= m:
        return _check_result(_v_row_le(bargmann_k, n, m, kap))
    return _check_result(_v_row_ge(bargmann_k, n, m, kap))


# --- su(2) ------------------------------------------------------------------

def _w_radial(spin_2j: int, n: int, m: int, ak2: float) -> float:
    log_pref = 0.5 * (
        math.lgamma(n + 1)
        + math.lgamma(m + 1)
        - (math.lgamma(spin_2j + 1) - math.lgamma(spin_2j - n + 1))
        - (math.lgamma(spin_2j + 1) - math.lgamma(spin_2j - m + 1))
    )
    expo = spin_2j / 2.0 - (n + m) / 2.0
    base = 1.0 - ak2
    if base > 0.0:
        return math.exp(log_pref + expo * math.log(base))
    # |kappa| = 1 happens only at |z| = pi/2 + k*pi
    if expo > 0.0:
        return 0.0
    if expo == 0.0:
        return math.exp(log_pref)
    raise OverflowError("matrix element singular at |kappa| = 1")


def _w_row_le(spin_2j: int, n: int, m: int, kap: complex) -> complex:
    ak2 = abs(kap) ** 2
    radial = _w_radial(spin_2j, n, m, ak2)
    return (-kap.conjugate()) ** (m - n) * radial * f_su2(n, m - n, ak2, spin_2j)


def _w_row_ge(spin_2j: int, n: int, m: int, kap: complex) -> complex:
    ak2 = abs(kap) ** 2
    radial = _w_radial(spin_2j, n, m, ak2)
    return kap ** (n - m) * radial * f_su2(m, n - m, ak2, spin_2j)


def matelem_w(spin_2j: int, n: int, m: int, z: complex) -> complex:
    """<J,n| exp(z J+ - conj(z) J-) |J,m> for su(2) with spin 2J."""
    if spin_2j < 1:
        raise ValueError("spin_2j must be >= 1")
    if n < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    if n > spin_2j or m > spin_2j:
        raise IndexError(f"indices must not exceed spin_2j={spin_2j}, got n={n}, m={m}")
    kap = kappa_su2(z)
    if n <= m:
        return _check_result(_w_row_le(spin_2j, n, m, kap))
    return _check_result(_w_row_ge(spin_2j, n, m, kap))


def matelem(algebra: AlgebraSpec, n: int, m: int, z: complex) -> complex:
    """Dispatch to the closed form matching ``algebra``."""
    if algebra.kind == OSCILLATOR:
        return matelem_u(n, m, z)
    if algebra.kind == SU11:
        return matelem_v(algebra.bargmann_k, n, m, z)
    return matelem_w(algebra.spin_2j, n, m, z)


# --- numeric cross-check ----------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    """Closed form vs numeric exponential over an index block.

    ``converged`` is True when doubling the working dimension moves the
    deviation by no more than 10% (or both deviations sit below 1e-12,
    where the difference is exponential-oracle roundoff).
    """

    max_deviation: float
    max_deviation_refined: float
    dim: int
    dim_refined: int
    converged: bool


def _block_deviation(algebra: AlgebraSpec, z: complex, max_index: int, dim: int) -> float:
    numeric = displacement_numeric(algebra, dim, z)
    worst = 0.0
    for n in range(max_index + 1):
        for m in range(max_index + 1):
            dev = abs(matelem(algebra, n, m, z) - numeric[n, m])
            if dev > worst:
                worst = dev
    return worst


def oracle_check(algebra: AlgebraSpec, z: complex, max_index: int, dim: int) -> OracleReport:
    """Compare closed forms against ``displacement_numeric`` on a block.

    For the truncated algebras the check reruns at twice the dimension;
    su(2) has no truncation, so the rerun uses the same exact dimension.
    """
    if algebra.kind == SU2:
        dim = algebra.finite_dim
        dim2 = dim
    else:
        if dim <= max_index:
            raise ValueError("dim must exceed max_index")
        dim2 = 2 * dim
    dev1 = _block_deviation(algebra, z, max_index, dim)
    dev2 = dev1 if dim2 == dim else _block_deviation(algebra, z, max_index, dim2)
    top = max(dev1, dev2)
    converged = top <= 1e-12 or abs(dev2 - dev1) <= 0.10 * top
    return OracleReport(dev1, dev2, dim, dim2, converged)
