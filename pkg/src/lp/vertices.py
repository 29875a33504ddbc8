"""Vertex enumeration for the moment-matching polytope.

Every vertex of {p >= 0 : p matches 1, E[B], ..., E[B^k]} is supported on
k+1 weights whose Vandermonde system has a nonnegative solution, so small
n can be solved by listing those systems instead of pivoting.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Optional, Tuple

import sympy

from src.core.weights import WeightPMF, admissible_weights, binomial_moments
from src.utils.errors import DomainError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAX_ENUMERATION_N = 12


@lru_cache(maxsize=None)
def vertex_laws(n: int, k: int) -> Tuple[WeightPMF, ...]:
    """All k-uniform weight laws that are vertices of the moment polytope"""
    if n > MAX_ENUMERATION_N:
        raise DomainError(f"vertex enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, n={n}], got {k}")
    targets = sympy.Matrix([1] + [sympy.Rational(m.numerator, m.denominator) for m in binomial_moments(n, k)])
    laws = []
    for basis in combinations(admissible_weights(n), k + 1):
        system = sympy.Matrix(k + 1, k + 1, lambda j, i: sympy.Integer(basis[i]) ** j)
        solution = system.LUsolve(targets)
        masses = [Fraction(int(v.p), int(v.q)) for v in solution]
        if all(p >= 0 for p in masses):
            laws.append(WeightPMF.from_masses(n, dict(zip(basis, masses))))
    logger.debug(f"{len(laws)} vertices for n={n} k={k}")
    return tuple(laws)


def vertex_optimum(n: int, k: int, indicator: Callable[[int], bool], sense: str = "max") -> Optional[Fraction]:
    """Optimum of Pr[indicator(W)] over k-uniform weight laws, by enumeration"""
    if sense not in ("max", "min"):
        raise DomainError(f"sense must be max or min, got {sense!r}")
    values = [sum((p for w, p in law.items if indicator(w)), Fraction(0)) for law in vertex_laws(n, k)]
    if not values:
        return None
    return max(values) if sense == "max" else min(values)
