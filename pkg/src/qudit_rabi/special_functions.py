"""Scalar building blocks for the coherent-operator matrix elements.

Everything here is a finite sum or product over integer indices:

- ``laguerre_assoc``: associated Laguerre polynomial L_k^(alpha)(x),
  evaluated from its defining alternating sum.
- ``pochhammer``: rising factorial (a)_n = a (a+1) ... (a+n-1).
- ``falling_perm``: falling factorial N! / (N-n)! used by the su(2)
  normalization.
- ``f_su11`` / ``f_su2``: the auxiliary F_m^(d) sums that appear in the
  su(1,1) and su(2) matrix elements.  No known reduction to classical
  special functions exists, so they are evaluated term by term.

The alternating sums cancel violently for large index or argument (the
terms of L_30(10) reach 1e11 while the value is order one), so plain
float accumulation loses many digits no matter the summation order.
Terms are therefore built in exact rational arithmetic (float inputs
are exact rationals), summed in ascending index order, and rounded once
at the end.  Each evaluation can also return a :class:`PolyEvalReport`
with the term count and the largest term magnitude, the quantity to
watch when judging how much cancellation occurred.

All functions are pure; inputs whose terms leave the floating-point
range raise OverflowError instead of propagating ``inf`` downstream.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PolyEvalReport",
    "laguerre_assoc",
    "laguerre_assoc_report",
    "pochhammer",
    "falling_perm",
    "f_su11",
    "f_su11_report",
    "f_su2",
    "f_su2_report",
]


@dataclass(frozen=True)
class PolyEvalReport:
    """Outcome of one term-by-term summation.

    ``terms_summed`` counts the whole index range of the defining sum
    (terms excluded by the su(2) starred rule are counted as zeros), so
    it is at least 1 for any valid input.  ``max_term_magnitude`` is the
    largest |term| encountered; a value much larger than |value| means
    the sum cancelled.
    """

    value: float
    terms_summed: int
    max_term_magnitude: float


def _exact_sum(terms) -> PolyEvalReport:
    # Terms are Fractions; the only rounding is the final conversion.
    total = Fraction(0)
    count = 0
    max_mag = Fraction(0)
    for term in terms:
        count += 1
        mag = -term if term < 0 else term
        if mag > max_mag:
            max_mag = mag
        total += term
    try:
        return PolyEvalReport(float(total), count, float(max_mag))
    except OverflowError as exc:
        raise OverflowError("sum left the floating-point range") from exc


def _check_index(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return value


def _as_fraction(name: str, value: float) -> Fraction:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return Fraction(value)


def _laguerre_terms(k: int, alpha: int, x: Fraction):
    # L_k^(alpha)(x) = sum_j (-1)^j C(k+alpha, k-j) x^j / j!
    for j in range(k + 1):
        # math.comb is exact; C(k+alpha, k-j) = 0 when k-j exceeds
        # k+alpha (possible for negative alpha).
        term = Fraction(math.comb(k + alpha, k - j), math.factorial(j)) * x**j
        yield -term if j % 2 else term


def laguerre_assoc_report(k: int, alpha: int, x: float) -> PolyEvalReport:
    _check_index("k", k)
    if not isinstance(alpha, int) or isinstance(alpha, bool):
        raise ValueError(f"alpha must be an integer, got {alpha!r}")
    if alpha < -k:
        raise ValueError(f"alpha must be >= -k, got alpha={alpha}, k={k}")
    return _exact_sum(_laguerre_terms(k, alpha, _as_fraction("x", x)))


def laguerre_assoc(k: int, alpha: int, x: float) -> float:
    """Associated Laguerre polynomial L_k^(alpha)(x).

    Correctly rounded for the given float x (the defining sum is carried
    out exactly); L_0^(alpha) is 1 for any alpha and x.
    """
    return laguerre_assoc_report(k, alpha, x).value


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1); 1 for n = 0.

    Factors are multiplied left to right in float arithmetic, so
    ``pochhammer(a, n+1) == pochhammer(a, n) * (a + n)`` holds bitwise.
    """
    _check_index("n", n)
    p = 1.0
    for i in range(n):
        p *= a + i
    if not math.isfinite(p):
        raise OverflowError("pochhammer overflowed the floating-point range")
    return p


def falling_perm(twoJ: int, n: int) -> float:
    """Falling factorial (2J)! / (2J - n)! for integer 0 <= n <= 2J."""
    _check_index("twoJ", twoJ)
    _check_index("n", n)
    if n > twoJ:
        raise ValueError(f"n must not exceed twoJ, got n={n}, twoJ={twoJ}")
    return float(math.perm(twoJ, n))


def _pochhammer_exact(a: Fraction, n: int) -> Fraction:
    p = Fraction(1)
    for i in range(n):
        p *= a + i
    return p


def _f_su11_terms(m: int, d: int, x: Fraction, two_k: Fraction):
    # F_m^(d)(x; 2K) with the paired index n = m + d:
    #   sum_{j=0}^{m} (-1)^(m-j) (2K)_{m+n-j} / ((m-j)! (n-j)! j!)
    #                 * (1+x)^j * x^(m-j)
    n = m + d
    for j in range(m + 1):
        term = _pochhammer_exact(two_k, m + n - j)
        term /= math.factorial(m - j) * math.factorial(n - j) * math.factorial(j)
        term *= (1 + x) ** j * x ** (m - j)
        yield -term if (m - j) % 2 else term


def f_su11_report(m: int, d: int, x: float, twoK: float) -> PolyEvalReport:
    _check_index("m", m)
    _check_index("d", d)
    if not (x >= 0.0 and math.isfinite(x)):
        raise ValueError(f"x must be finite and >= 0, got {x}")
    if not (twoK > 0.0 and math.isfinite(twoK)):
        raise ValueError(f"twoK must be positive and finite, got {twoK}")
    return _exact_sum(_f_su11_terms(m, d, Fraction(x), Fraction(twoK)))


def f_su11(m: int, d: int, x: float, twoK: float) -> float:
    """Auxiliary su(1,1) sum F_m^(d)(x; 2K).

    The Gamma ratio Gamma(2K+m+n-j)/Gamma(2K) is evaluated as the rising
    factorial (2K)_{m+n-j}, never as a quotient of two Gamma values.
    """
    return f_su11_report(m, d, x, twoK).value


def _f_su2_terms(m: int, d: int, x: Fraction, two_j: int):
    # Starred sum: only j with 2J - m - n + j >= 0 contribute (n = m + d).
    n = m + d
    for j in range(m + 1):
        if two_j - m - n + j < 0:
            yield Fraction(0)
            continue
        term = Fraction(
            math.perm(two_j, m + n - j),
            math.factorial(m - j) * math.factorial(n - j) * math.factorial(j),
        )
        term *= (1 - x) ** j * x ** (m - j)
        yield -term if (m - j) % 2 else term


def f_su2_report(m: int, d: int, x: float, twoJ: int) -> PolyEvalReport:
    _check_index("m", m)
    _check_index("d", d)
    _check_index("twoJ", twoJ)
    if twoJ < 1:
        raise ValueError(f"twoJ must be >= 1, got {twoJ}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return _exact_sum(_f_su2_terms(m, d, Fraction(x), twoJ))


def f_su2(m: int, d: int, x: float, twoJ: int) -> float:
    """Auxiliary su(2) sum F_m^(d)(x; 2J) with the starred index rule.

    Indices m + d beyond 2J are allowed; the starred rule then silently
    removes the offending terms (the whole sum may be empty, giving 0).
    """
    return f_su2_report(m, d, x, twoJ).value
