"""Equal-variance Gaussian mixtures against the standard normal.

Distances are evaluated on the symmetric grid step * {-N, ..., N},
N = round(radius / step), so x = 0 is always a grid point.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtr, softmax

from src.config import get_settings
from src.utils.errors import DimensionMismatchError, DomainError
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

FIT_STEP = 1e-2


@dataclass(frozen=True)
class GaussMixture:
    k: int
    means: Tuple[float, ...]
    weights: Tuple[float, ...]
    variance: float

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if len(self.means) != self.k or len(self.weights) != self.k:
            raise DimensionMismatchError("need one mean and one weight per component")
        if self.variance <= 0:
            raise DomainError(f"variance must be positive, got {self.variance}")
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1) > 1e-12:
            raise DomainError("weights must be nonnegative and sum to 1")

    def pdf(self, x: np.ndarray) -> np.ndarray:
        return mixture_pdf(self, x)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return mixture_cdf(self, x)


def grid(radius: Optional[float] = None, step: Optional[float] = None) -> np.ndarray:
    settings = get_settings()
    radius = settings.grid_radius if radius is None else radius
    step = settings.grid_step if step is None else step
    if step <= 0 or radius <= 0:
        raise DomainError("grid radius and step must be positive")
    half = int(round(radius / step))
    return step * np.arange(-half, half + 1)


def gaussian_pdf(x: np.ndarray, mean: float = 0.0, var: float = 1.0) -> np.ndarray:
    z = (x - mean) / np.sqrt(var)
    return np.exp(-z * z / 2) / np.sqrt(2 * np.pi * var)


def mixture_pdf(mixture: GaussMixture, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    parts = [w * gaussian_pdf(x, mu, mixture.variance) for mu, w in zip(mixture.means, mixture.weights)]
    return np.sum(parts, axis=0)


def mixture_cdf(mixture: GaussMixture, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    sd = np.sqrt(mixture.variance)
    parts = [w * ndtr((x - mu) / sd) for mu, w in zip(mixture.means, mixture.weights)]
    return np.sum(parts, axis=0)


def sup_distance(mixture: GaussMixture, grid_radius: Optional[float] = None,
                 grid_step: Optional[float] = None) -> float:
    """max over the grid of |phi(x) - mixture pdf(x)|; a lower bound on the true sup"""
    xs = grid(grid_radius, grid_step)
    return float(np.max(np.abs(gaussian_pdf(xs) - mixture_pdf(mixture, xs))))


def interval_advantage(mixture: GaussMixture, grid_radius: Optional[float] = None,
                       grid_step: Optional[float] = None) -> Tuple[Tuple[float, float], float]:
    """Interval between grid points maximizing |P_normal(I) - P_mixture(I)|"""
    xs = grid(grid_radius, grid_step)
    h = ndtr(xs) - mixture_cdf(mixture, xs)
    lo, hi = int(np.argmin(h)), int(np.argmax(h))
    a, b = sorted((float(xs[lo]), float(xs[hi])))
    return (a, b), float(h[hi] - h[lo])


def normal_vs_mixture_alpha(sigma2: float) -> float:
    """alpha = 1 / (2 sigma^2) - 1/2, the exponent left after factoring out the mixture kernel"""
    if not 0 < sigma2 <= 1:
        raise DomainError(f"sigma2 must lie in (0, 1], got {sigma2}")
    return 1 / (2 * sigma2) - 0.5


@dataclass(frozen=True)
class MixtureFit:
    mixture: GaussMixture
    distance: float
    exhausted: bool
    starts: int


def _unpack(x: np.ndarray, k: int, sigma2: float) -> GaussMixture:
    weights = softmax(x[k:])
    return GaussMixture(k, tuple(float(m) for m in x[:k]), tuple(float(w) for w in weights), sigma2)


def _starts(k: int, count: int, seed: int) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    first = np.concatenate([np.linspace(-1, 1, k) if k > 1 else np.zeros(1), np.zeros(k)])
    out = [first]
    for _ in range(count - 1):
        out.append(np.concatenate([rng.normal(0, 1.5, k), rng.normal(0, 1, k)]))
    return out


def best_mixture_fit(k: int, sigma2: float, budget: Optional[int] = None, seed: Optional[int] = None,
                     starts: Optional[int] = None, threads: Optional[int] = None) -> MixtureFit:
    """
    Multi-start Nelder-Mead search for the k-mixture closest to N(0, 1) in sup norm

    Args:
        k: Number of components
        sigma2: Common component variance in (0, 1]
        budget: Function evaluations per start
        seed: Seed for the random starts
        starts: Number of starts (the first one is deterministic)
        threads: Worker threads for the starts

    Returns:
        MixtureFit with the best mixture found and its distance on the full grid;
        exhausted is set when the winning start hit the budget
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not 0 < sigma2 <= 1:
        raise DomainError(f"sigma2 must lie in (0, 1], got {sigma2}")
    settings = get_settings()
    budget = budget or settings.mixture_budget
    seed = settings.seed if seed is None else seed
    count = starts or settings.mixture_starts

    coarse = grid(step=FIT_STEP)
    target = gaussian_pdf(coarse)

    def objective(x: np.ndarray) -> float:
        weights = softmax(x[k:])
        pdf = np.sum([w * gaussian_pdf(coarse, mu, sigma2) for mu, w in zip(x[:k], weights)], axis=0)
        return float(np.max(np.abs(target - pdf)))

    def run(x0: np.ndarray):
        result = minimize(objective, x0, method="Nelder-Mead", options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-14})
        return x0, result

    results = ordered_map(run, _starts(k, count, seed), threads)

    best = None
    for x0, result in results:
        for candidate, hit_budget in ((x0, False), (result.x, result.nfev >= budget)):
            mixture = _unpack(np.asarray(candidate, dtype=float), k, sigma2)
            distance = sup_distance(mixture)
            if best is None or distance < best.distance:
                best = MixtureFit(mixture, distance, hit_budget, count)

    logger.info(f"✅ Best {k}-mixture fit at sigma2={sigma2}: distance {best.distance:.3e}")
    if best.exhausted:
        logger.warning(f"⚠️ Winning start used the full budget of {budget} evaluations")
    return best
