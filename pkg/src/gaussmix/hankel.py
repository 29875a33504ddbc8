"""Hankel matrices M_k(f) with entries f(i + j - k - 2), 1 <= i, j <= k+1.

M_k(f) is singular whenever f is a sum of at most k exponentials, and the
smallest singular value of M_k(q^(x^2)) is bounded below through the
entries of its inverse. Together these give a certified lower bound on how
well k exponentials can match q^(x^2) at the integers -k..k.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from scipy.optimize import minimize

from src.config import get_settings
from src.utils.errors import DomainError
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map
from src.utils.rationals import is_rational, to_mpf

logger = get_logger(__name__)


@dataclass(frozen=True)
class MkMatrix:
    k: int
    entries: Tuple[Tuple, ...]

    @property
    def exact(self) -> bool:
        return all(is_rational(v) for row in self.entries for v in row)

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)]
                             for row in self.entries])

    def to_mpmath(self) -> mpmath.matrix:
        return mpmath.matrix([[to_mpf(v) for v in row] for row in self.entries])


def mk_matrix(f: Callable[[int], object], k: int) -> MkMatrix:
    """(k+1) x (k+1) Hankel matrix of f on -k..k"""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    values = {x: f(x) for x in range(-k, k + 1)}
    entries = tuple(tuple(values[i + j - k - 2] for j in range(1, k + 2)) for i in range(1, k + 2))
    return MkMatrix(k, entries)


def _sympy_to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def det_mk(f: Callable[[int], object], k: int):
    """Exact (fraction-free Bareiss) determinant when f is rational on the integers, else mpmath"""
    matrix = mk_matrix(f, k)
    if matrix.exact:
        return _sympy_to_fraction(matrix.to_sympy().det(method="bareiss"))
    return mpmath.det(matrix.to_mpmath())


def exponential_sum(coefficients: Sequence, bases: Sequence) -> Callable[[int], Fraction]:
    """x -> sum_i a_i b_i^x with rational a_i and positive rational b_i"""
    pairs = [(Fraction(a), Fraction(b)) for a, b in zip(coefficients, bases)]
    if any(b <= 0 for _, b in pairs):
        raise DomainError("exponential bases must be positive")
    return lambda x: sum((a * b ** x for a, b in pairs), Fraction(0))


def gaussian_kernel(q) -> Callable[[int], Fraction]:
    """x -> q^(x^2)"""
    q = Fraction(q)
    return lambda x: q ** (x * x)


def gapmiddle_lower(k: int, d_half, alpha) -> mpmath.mpf:
    """prod_{i=1..k} (1 - q^(-2i)) / (4^k (k+1)) with q = exp(D^2 alpha / k)"""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    d_half, alpha = to_mpf(d_half), to_mpf(alpha)
    if d_half <= 0 or alpha <= 0:
        raise DomainError("D and alpha must be positive")
    q = mpmath.exp(d_half ** 2 * alpha / k)
    product = mpmath.fprod(1 - q ** (-2 * i) for i in range(1, k + 1))
    return product / (mpmath.power(4, k) * (k + 1))


def sample_values(k: int, d_half, alpha) -> np.ndarray:
    """q^(j^2) for j = -k..k: exp(alpha x^2) at x = D j / sqrt(k)"""
    q = float(mpmath.exp(to_mpf(d_half) ** 2 * to_mpf(alpha) / k))
    js = np.arange(-k, k + 1, dtype=float)
    return q ** (js ** 2)


def sample_point_gap(k: int, d_half, alpha, coefficients: Sequence[float], bases: Sequence[float]) -> float:
    """max_j |q^(j^2) - sum_i a_i b_i^j| over the 2k+1 sample points"""
    js = np.arange(-k, k + 1, dtype=float)
    approx = np.sum([a * np.power(b, js) for a, b in zip(coefficients, bases)], axis=0)
    return float(np.max(np.abs(sample_values(k, d_half, alpha) - approx)))


@dataclass(frozen=True)
class ExponentialFit:
    coefficients: Tuple[float, ...]
    bases: Tuple[float, ...]
    gap: float


def _fit_from_log_bases(log_bases: np.ndarray, k: int, target: np.ndarray) -> Tuple[np.ndarray, float]:
    js = np.arange(-k, k + 1, dtype=float)
    design = np.exp(np.outer(js, log_bases))
    coefficients, *_ = np.linalg.lstsq(design, target, rcond=None)
    return coefficients, float(np.max(np.abs(target - design @ coefficients)))


def fit_exponential_sum(k: int, d_half, alpha, starts: int = 8, seed: Optional[int] = None,
                        budget: Optional[int] = None) -> ExponentialFit:
    """
    Best k-term exponential sum found for q^(x^2) at the sample points

    Bases are searched with Nelder-Mead in log space; coefficients come
    from least squares for each candidate set of bases.
    """
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    budget = budget or settings.mixture_budget
    target = sample_values(k, d_half, alpha)
    rng = np.random.default_rng(seed)
    initial = [np.linspace(-1, 1, k)] + [rng.normal(0, 1, k) for _ in range(starts - 1)]

    def run(x0):
        result = minimize(lambda x: _fit_from_log_bases(x, k, target)[1], x0,
                          method="Nelder-Mead", options={"maxfev": budget})
        return result.x

    best = None
    for log_bases in ordered_map(run, initial):
        coefficients, _ = _fit_from_log_bases(log_bases, k, target)
        bases = np.exp(log_bases)
        gap = sample_point_gap(k, d_half, alpha, coefficients, bases)
        if best is None or gap < best.gap:
            best = ExponentialFit(tuple(float(c) for c in coefficients), tuple(float(b) for b in bases), gap)
    logger.debug(f"Exponential fit k={k}: gap {best.gap:.3e}")
    return best
