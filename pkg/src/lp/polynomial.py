"""Univariate polynomials with exact rational (or mpmath) coefficients."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from typing import Iterable, List, Sequence, Tuple

import mpmath

from src.core.weights import WeightPMF
from src.utils.errors import DomainError
from src.utils.rationals import to_fraction, to_mpf


def _trim(coeffs: Iterable) -> Tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class UnivariatePoly:
    """Polynomial sum_i coeffs[i] x^i, trailing zeros removed"""
    coeffs: Tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, c) -> "UnivariatePoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "UnivariatePoly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def monomial(cls, degree: int, c=Fraction(1)) -> "UnivariatePoly":
        return cls((Fraction(0),) * degree + (c,))

    @classmethod
    def from_roots(cls, roots: Sequence, lead=Fraction(1)) -> "UnivariatePoly":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-r, Fraction(1)))
        return p

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def __call__(self, x):
        if self.is_exact and isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = to_mpf(x)
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + to_mpf(c)
        return acc

    def __add__(self, other):
        other = _lift(other)
        return UnivariatePoly(tuple(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0)))

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePoly(())
        out: List = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        out = UnivariatePoly.constant(Fraction(1))
        for _ in range(e):
            out = out * self
        return out

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose_affine(self, a, b) -> "UnivariatePoly":
        """p(a x + b)"""
        inner = UnivariatePoly((b, a))
        out = UnivariatePoly(())
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def expectation(self, pmf: WeightPMF):
        """E[p(W)] under a weight law"""
        return sum((p * self(w) for w, p in pmf.items), Fraction(0))

    def real_critical_points(self, lo, hi) -> List[mpmath.mpf]:
        """Real roots of p' inside [lo, hi], found with mpmath"""
        d = self.derivative()
        if d.degree < 1:
            return []
        coeffs = [to_mpf(c) for c in reversed(d.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        tol = mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
        out = []
        for r in roots:
            r = mpmath.mpc(r)
            if abs(r.imag) <= tol and to_mpf(lo) - tol <= r.real <= to_mpf(hi) + tol:
                out.append(r.real)
        return out

    def sup_abs_on(self, lo, hi) -> mpmath.mpf:
        """max |p| over the real interval [lo, hi]"""
        points = [to_mpf(lo), to_mpf(hi)] + self.real_critical_points(lo, hi)
        return max(abs(self(x)) for x in points)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[str(c) for c in self.coeffs]})"


def _lift(value) -> UnivariatePoly:
    if isinstance(value, UnivariatePoly):
        return value
    return UnivariatePoly.constant(value)


def chebyshev_t(k: int) -> UnivariatePoly:
    """Chebyshev polynomial of the first kind via T_{j+1} = 2x T_j - T_{j-1}"""
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    prev, cur = UnivariatePoly.constant(Fraction(1)), UnivariatePoly.x()
    if k == 0:
        return prev
    two_x = UnivariatePoly((Fraction(0), Fraction(2)))
    for _ in range(k - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


def parse_poly(coeffs: Sequence) -> UnivariatePoly:
    return UnivariatePoly(tuple(to_fraction(c) for c in coeffs))
