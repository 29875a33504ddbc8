"""Parity biases of exchangeable distributions via Krawtchouk polynomials.

For a slice of weight t, the product of any l coordinates has mean
K_l(j) / C(n, l) where j = (n - t) / 2 is the number of -1 coordinates.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Tuple

import mpmath

from src.core.weights import WeightPMF, check_weight
from src.utils.errors import DomainError
from src.utils.rationals import to_mpf


@lru_cache(maxsize=None)
def krawtchouk(n: int, ell: int, j: int) -> int:
    """K_ell(j) = sum_i (-1)^i C(j, i) C(n - j, ell - i)"""
    if not 0 <= ell <= n or not 0 <= j <= n:
        raise DomainError(f"need 0 <= ell, j <= n; got n={n}, ell={ell}, j={j}")
    return sum((-1) ** i * comb(j, i) * comb(n - j, ell - i) for i in range(min(j, ell) + 1))


def slice_bias(n: int, t: int, ell: int) -> Fraction:
    """E[x_1 ... x_ell] under the uniform distribution on the weight-t slice"""
    check_weight(n, t)
    if not 0 <= ell <= n:
        raise DomainError(f"ell must lie in [0, {n}], got {ell}")
    return Fraction(krawtchouk(n, ell, (n - t) // 2), comb(n, ell))


@dataclass(frozen=True)
class BiasProfile:
    """biases[ell] = parity bias of every size-ell set, ell = 0..n"""
    n: int
    biases: Tuple[Fraction, ...]

    def __getitem__(self, ell: int) -> Fraction:
        return self.biases[ell]

    def max_bias(self, start: int = 1) -> Fraction:
        return max((abs(b) for b in self.biases[start:]), default=Fraction(0))


def bias_profile(pmf: WeightPMF) -> BiasProfile:
    n = pmf.n
    biases = tuple(
        sum((p * slice_bias(n, w, ell) for w, p in pmf.items), Fraction(0))
        for ell in range(n + 1)
    )
    return BiasProfile(n, biases)


def max_bias(pmf: WeightPMF) -> Fraction:
    """Largest |bias| over nonempty parities"""
    return bias_profile(pmf).max_bias()


def is_eps_biased(pmf: WeightPMF, eps) -> bool:
    return max_bias(pmf) <= eps


def lemma13_bound(n: int, t: int, ell: int) -> mpmath.mpf:
    """(ell/n + t^2/n^2)^(ell/2), bounding |slice_bias(n, t, ell)| for ell <= n/2"""
    check_weight(n, t)
    if not 0 <= ell <= n:
        raise DomainError(f"ell must lie in [0, {n}], got {ell}")
    base = Fraction(ell, n) + Fraction(t * t, n * n)
    if ell % 2 == 0:
        return to_mpf(base ** (ell // 2))
    return to_mpf(base) ** (mpmath.mpf(ell) / 2)


def reflected_order(n: int, ell: int) -> int:
    """min(ell, n - ell); slice biases agree in absolute value at ell and n - ell"""
    return min(ell, n - ell)
