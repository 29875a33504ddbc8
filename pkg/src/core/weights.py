"""Weight distributions of exchangeable distributions on {-1, 1}^n.

An exchangeable distribution is determined by the law of its weight
W = sum of coordinates, a PMF on {-n, -n+2, ..., n}. Everything here is
exact rational arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import mpmath

from src.utils.errors import DegenerateInputError, DimensionMismatchError, DomainError, ParityError
from src.utils.rationals import to_fraction, to_mpf


def check_weight(n: int, w: int) -> None:
    if (n + w) % 2 != 0 or abs(w) > n:
        raise ParityError(f"weight {w} is not admissible for n={n}")


def admissible_weights(n: int) -> List[int]:
    """All weights -n, -n+2, ..., n"""
    if n < 1:
        raise DegenerateInputError(f"n must be >= 1, got {n}")
    return list(range(-n, n + 1, 2))


def first_admissible_at_least(n: int, x) -> int:
    """Smallest weight of parity n that is >= x (may exceed n)"""
    t = int(mpmath.ceil(to_mpf(x)))
    if (t + n) % 2:
        t += 1
    return t


@dataclass(frozen=True)
class WeightPMF:
    """PMF of the weight of an exchangeable distribution.

    ``items`` holds (weight, mass) pairs with strictly positive mass,
    sorted by weight. Use :meth:`from_masses` to build one.
    """
    n: int
    items: Tuple[Tuple[int, Fraction], ...]

    def __post_init__(self):
        if self.n < 1:
            raise DegenerateInputError(f"n must be >= 1, got {self.n}")
        if not self.items:
            raise DegenerateInputError("empty support")
        total = Fraction(0)
        for w, p in self.items:
            check_weight(self.n, w)
            if p <= 0:
                raise DomainError(f"mass at {w} must be positive, got {p}")
            total += p
        if total != 1:
            raise DomainError(f"masses sum to {total}, not 1")

    @classmethod
    def from_masses(cls, n: int, masses: Mapping[int, object], normalize: bool = False) -> "WeightPMF":
        """Build from a weight -> mass mapping; zero masses are dropped."""
        cleaned: Dict[int, Fraction] = {}
        for w, p in masses.items():
            p = to_fraction(p)
            if p < 0:
                raise DomainError(f"negative mass {p} at weight {w}")
            if p:
                cleaned[int(w)] = cleaned.get(int(w), Fraction(0)) + p
        if normalize and cleaned:
            total = sum(cleaned.values())
            cleaned = {w: p / total for w, p in cleaned.items()}
        return cls(n, tuple(sorted(cleaned.items())))

    @property
    def masses(self) -> Dict[int, Fraction]:
        return dict(self.items)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(w for w, _ in self.items)

    def __getitem__(self, w: int) -> Fraction:
        return self.masses.get(w, Fraction(0))

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        body = ", ".join(f"{w}: {p}" for w, p in self.items)
        return f"WeightPMF(n={self.n}, {{{body}}})"


@lru_cache(maxsize=None)
def binomial_pmf(n: int) -> WeightPMF:
    """Weight law of the uniform distribution on {-1, 1}^n"""
    return WeightPMF.from_masses(
        n, {w: Fraction(comb(n, (n + w) // 2), 2 ** n) for w in admissible_weights(n)}
    )


def slice_pmf(n: int, t: int) -> WeightPMF:
    """Point mass at weight t (uniform distribution on a slice)"""
    check_weight(n, t)
    return WeightPMF(n, ((t, Fraction(1)),))


def moments(pmf: WeightPMF, k: int) -> Tuple[Fraction, ...]:
    """(E[W], E[W^2], ..., E[W^k])"""
    return tuple(sum(p * w ** j for w, p in pmf.items) for j in range(1, k + 1))


@lru_cache(maxsize=None)
def binomial_moments(n: int, k: int) -> Tuple[Fraction, ...]:
    return moments(binomial_pmf(n), k)


def is_k_uniform(pmf: WeightPMF, k: int) -> bool:
    """True iff the first k weight moments match the binomial ones.

    For exchangeable distributions this is equivalent to every set of at
    most k coordinates being uniform.
    """
    if k < 0 or k > pmf.n:
        raise DomainError(f"k must lie in [0, n={pmf.n}], got {k}")
    return moments(pmf, k) == binomial_moments(pmf.n, k)


def tail_mass(pmf: WeightPMF, t) -> Fraction:
    """Pr[W >= t]"""
    return sum((p for w, p in pmf.items if w >= t), Fraction(0))


def lower_tail_mass(pmf: WeightPMF, t) -> Fraction:
    """Pr[W <= t]"""
    return sum((p for w, p in pmf.items if w <= t), Fraction(0))


def two_sided_tail_mass(pmf: WeightPMF, t) -> Fraction:
    """Pr[|W| >= t]"""
    return sum((p for w, p in pmf.items if abs(w) >= t), Fraction(0))


def point_mass(pmf: WeightPMF, t: int) -> Fraction:
    return pmf[t]


def interval_mass(pmf: WeightPMF, a, b) -> Fraction:
    """Pr[a <= W <= b]; zero when a > b"""
    if a > b:
        return Fraction(0)
    return sum((p for w, p in pmf.items if a <= w <= b), Fraction(0))


def complement(pmf: WeightPMF) -> WeightPMF:
    """Weight law after flipping every coordinate: w -> -w"""
    return WeightPMF(pmf.n, tuple(sorted((-w, p) for w, p in pmf.items)))


def mixture(components: Sequence[WeightPMF], weights: Iterable) -> WeightPMF:
    """Convex combination of weight laws on the same n"""
    components = list(components)
    weights = [to_fraction(c) for c in weights]
    if not components:
        raise DegenerateInputError("empty mixture")
    if len(weights) != len(components):
        raise DimensionMismatchError("one weight per component is required")
    if any(c < 0 for c in weights) or sum(weights) != 1:
        raise DomainError("mixture weights must be nonnegative and sum to 1")
    n = components[0].n
    if any(c.n != n for c in components):
        raise DimensionMismatchError("mixture components must share n")
    acc: Dict[int, Fraction] = {}
    for pmf, c in zip(components, weights):
        for w, p in pmf.items:
            acc[w] = acc.get(w, Fraction(0)) + c * p
    return WeightPMF.from_masses(n, acc)


def slice_mixture(n: int, masses: Mapping[int, object]) -> WeightPMF:
    """Mixture of slices given directly as weight -> mass"""
    return WeightPMF.from_masses(n, masses)


def stirling_point_bound(n: int, a: int) -> mpmath.mpf:
    """Lower bound 2^(-a^2/n) / (2 sqrt(n)) on Pr[B = a] for even n"""
    if n < 2 or n % 2:
        raise DomainError(f"n must be even and positive, got {n}")
    check_weight(n, a)
    return mpmath.power(2, -mpmath.mpf(a) ** 2 / n) / (2 * mpmath.sqrt(n))


def check_stirling(n: int, a: int) -> Tuple[bool, Fraction, mpmath.mpf]:
    exact = binomial_pmf(n)[a]
    bound = stirling_point_bound(n, a)
    return to_mpf(exact) >= bound - mpmath.mpf(10) ** -15, exact, bound

