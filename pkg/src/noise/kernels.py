"""Noise operators acting on weight laws.

smooth: every coordinate is multiplied by an independent N_rho sample,
    i.e. flipped with probability (1 - rho) / 2.
replace_noise: one uniformly chosen coordinate is re-randomized per round.

Both are exact Markov kernels on weights; the string-level processes
they summarize are exchangeable-preserving.
"""
from fractions import Fraction
from math import comb
from typing import Dict, List, Tuple

import mpmath

from src.core.weights import WeightPMF, check_weight, slice_pmf
from src.utils.errors import DomainError
from src.utils.logger import get_logger
from src.utils.rationals import check_rho, to_fraction, to_mpf

logger = get_logger(__name__)


def _binomial_numerators(m: int, a: int, b: int) -> List[int]:
    """Numerators of Bin(m, a/b) over the common denominator b^m"""
    return [comb(m, i) * a ** i * (b - a) ** (m - i) for i in range(m + 1)]


def smooth(pmf: WeightPMF, rho) -> WeightPMF:
    """Weight law of x * N_rho where x has weight law pmf"""
    rho = check_rho(rho)
    n = pmf.n
    flip = (1 - rho) / 2
    a, b = flip.numerator, flip.denominator
    denom = b ** n

    acc: Dict[int, Fraction] = {}
    for w, p in pmf.items:
        n_plus = (n + w) // 2
        plus = _binomial_numerators(n_plus, a, b)
        minus = _binomial_numerators(n - n_plus, a, b)
        # F+ plus-coordinates flip down, F- minus-coordinates flip up
        local: Dict[int, int] = {}
        for i, u in enumerate(plus):
            if not u:
                continue
            for j, v in enumerate(minus):
                if v:
                    target = w - 2 * i + 2 * j
                    local[target] = local.get(target, 0) + u * v
        for target, num in local.items():
            acc[target] = acc.get(target, Fraction(0)) + p * Fraction(num, denom)
    return WeightPMF.from_masses(n, acc)


def _replace_step(n: int, masses: Dict[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for w, p in masses.items():
        down = Fraction(n + w, 4 * n)
        up = Fraction(n - w, 4 * n)
        for target, q in ((w, Fraction(1, 2)), (w - 2, down), (w + 2, up)):
            if q:
                out[target] = out.get(target, Fraction(0)) + p * q
    return out


def replace_noise(pmf: WeightPMF, rounds: int = 1) -> WeightPMF:
    """Re-randomize one uniformly chosen coordinate, `rounds` times"""
    if rounds < 0:
        raise DomainError(f"rounds must be >= 0, got {rounds}")
    masses = pmf.masses
    for _ in range(rounds):
        masses = _replace_step(pmf.n, masses)
    return WeightPMF.from_masses(pmf.n, masses)


def noise_moments(x: int, rho, centered: bool = False) -> Tuple[Fraction, Fraction, Fraction]:
    """
    First three moments of Y = x * N_rho for a single sign x

    Args:
        x: +1 or -1
        rho: Correlation in [0, 1]
        centered: Moments of Y - rho x instead of Y

    Returns:
        (mean, second, third); centered gives (0, 1 - rho^2, -2 rho (1 - rho^2) x)
    """
    if x not in (-1, 1):
        raise DomainError(f"x must be +1 or -1, got {x}")
    rho = check_rho(rho)
    shift = rho * x if centered else Fraction(0)
    law = ((x - shift, (1 + rho) / 2), (-x - shift, (1 - rho) / 2))
    return tuple(sum((q * y ** j for y, q in law), Fraction(0)) for j in (1, 2, 3))


def noise_deviation_tail(n: int, w: int, rho, s) -> Fraction:
    """Pr[|sum(x * N_rho) - rho w| >= s] for any x of weight w"""
    check_weight(n, w)
    rho = check_rho(rho)
    s = to_fraction(s)
    smoothed = smooth(slice_pmf(n, w), rho)
    return sum((p for v, p in smoothed.items if abs(v - rho * w) >= s), Fraction(0))


def bernstein_noise_bound(n: int, rho, s, c=Fraction(1, 8)) -> mpmath.mpf:
    """2 exp(-c s^2 / ((1 - rho^2) n + s))"""
    rho = check_rho(rho)
    s = to_mpf(s)
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    variance = (1 - to_mpf(rho) ** 2) * n
    return 2 * mpmath.exp(-to_mpf(c) * s ** 2 / (variance + s))
