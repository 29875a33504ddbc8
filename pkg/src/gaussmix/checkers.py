"""Instance checkers for the approximation-theory inequalities.

Each checker reports hypotheses and conclusion separately: a failed
hypothesis never counts as a failed conclusion.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from src.lp.polynomial import UnivariatePoly, chebyshev_t
from src.utils.errors import DomainError
from src.utils.logger import get_logger
from src.utils.rationals import at_most, to_fraction, to_mpf

logger = get_logger(__name__)


@dataclass(frozen=True)
class PolyCheckReport:
    name: str
    hypothesis_ok: bool
    applicable: bool
    passed: bool
    lhs: object = None
    rhs: object = None
    note: str = ""

    @property
    def conclusion_failed(self) -> bool:
        return self.hypothesis_ok and self.applicable and not self.passed


def _hypothesis_failure(name: str, note: str) -> PolyCheckReport:
    logger.debug(f"{name}: hypothesis not met ({note})")
    return PolyCheckReport(name, hypothesis_ok=False, applicable=False, passed=False, note=note)


def erdelyi_check(poly: UnivariatePoly, m: int, scale) -> PolyCheckReport:
    """
    If deg Q < 7 sqrt(m / L) then |Q(0)| <= (1/L) sum_{j=1..m} |Q(j)|

    Hypotheses: m >= 1 and 0 < L <= m. Degrees at or above 7 sqrt(m/L)
    make the statement vacuous (applicable=False, passed=True).
    """
    scale = to_fraction(scale)
    if m < 1 or not 0 < scale <= m:
        return _hypothesis_failure("erdelyi", f"need m >= 1 and 0 < L <= m, got m={m}, L={scale}")
    d = max(poly.degree, 0)
    if d * d * scale >= 49 * m:
        return PolyCheckReport("erdelyi", True, False, True, note="degree outside the contrapositive range")
    lhs = abs(poly(Fraction(0)))
    rhs = sum((abs(poly(Fraction(j))) for j in range(1, m + 1)), Fraction(0)) / scale
    return PolyCheckReport("erdelyi", True, True, lhs <= rhs, lhs, rhs)


def coppersmith_check(poly: UnivariatePoly, m: int) -> PolyCheckReport:
    """If 3 d^2 <= m and |p(i)| <= 1 for i = 0..m then |p(x)| <= 3/2 on [0, m]"""
    d = max(poly.degree, 0)
    if m < 1 or 3 * d * d > m:
        return _hypothesis_failure("coppersmith", f"need 3 d^2 <= m, got d={d}, m={m}")
    if any(abs(poly(Fraction(i))) > 1 for i in range(m + 1)):
        return _hypothesis_failure("coppersmith", "|p(i)| exceeds 1 at some integer point")
    sup = poly.sup_abs_on(0, m)
    return PolyCheckReport("coppersmith", True, True, at_most(sup, Fraction(3, 2)), sup, Fraction(3, 2))


def chebyshev_extremal_check(poly: UnivariatePoly, s) -> PolyCheckReport:
    """If |p| <= 1 on [-1, 1] and |s| >= 1 then |p(s)| <= |T_k(s)| <= (2|s|)^k, k = deg p"""
    s = to_fraction(s)
    if abs(s) < 1:
        return _hypothesis_failure("chebyshev", f"need |s| >= 1, got {s}")
    if not at_most(poly.sup_abs_on(-1, 1), 1):
        return _hypothesis_failure("chebyshev", "p exceeds 1 on [-1, 1]")
    k = max(poly.degree, 0)
    value = abs(poly(s))
    extremal = abs(chebyshev_t(k)(s))
    envelope = (2 * abs(s)) ** k
    return PolyCheckReport("chebyshev", True, True, value <= extremal <= envelope, value, envelope,
                           note=f"T_{k}(s) = {extremal}")


def euler_product_lower(x, tolerance: Optional[mpmath.mpf] = None):
    """
    Certified lower bound on prod_{i >= 1} (1 - x^i)

    Returns:
        (lower bound, number of factors used); the tail is bounded by
        prod_{i > N} (1 - x^i) >= 1 - x^(N+1) / (1 - x)
    """
    x = to_mpf(x)
    if not 0 < x < 1:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    tolerance = tolerance or mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    partial, power, terms = mpmath.mpf(1), x, 0
    while power / (1 - x) >= tolerance:
        partial *= 1 - power
        power *= x
        terms += 1
    return partial * (1 - power / (1 - x)), terms


def series_lower_check(x) -> PolyCheckReport:
    """prod_{i >= 1} (1 - x^i) >= exp(-pi^2 / (6 (1 - x)))"""
    lower, _ = euler_product_lower(x)
    rhs = mpmath.exp(-mpmath.pi ** 2 / (6 * (1 - to_mpf(x))))
    return PolyCheckReport("series", True, True, lower >= rhs, lower, rhs)


def random_rational_poly(rng: np.random.Generator, degree: int, max_numerator: int = 5,
                         max_denominator: int = 10) -> UnivariatePoly:
    """Seeded random polynomial with a nonzero leading coefficient"""
    coeffs = []
    for idx in range(degree + 1):
        numerator = 0
        while numerator == 0 and idx == degree:
            numerator = int(rng.integers(-max_numerator, max_numerator + 1))
        if idx < degree:
            numerator = int(rng.integers(-max_numerator, max_numerator + 1))
        coeffs.append(Fraction(numerator, int(rng.integers(1, max_denominator + 1))))
    return UnivariatePoly(tuple(coeffs))
