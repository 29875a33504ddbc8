"""Closed-form bounds used to sanity-check exact computations.

All values are mpmath floats at the configured precision.
"""
from fractions import Fraction
from typing import Iterable, List, Tuple

import mpmath

from src.core.weights import binomial_pmf, first_admissible_at_least, stirling_point_bound, tail_mass
from src.lp.constructions import fact2_bound
from src.models.schemas import ParamSet
from src.noise.kernels import bernstein_noise_bound
from src.utils.errors import DomainError
from src.utils.rationals import check_rho, to_mpf

__all__ = [
    "fact2_bound",
    "stirling_point_bound",
    "berry_esseen_bound",
    "petrov_factor",
    "phi_bar",
    "phi_density",
    "phi_tail_bounds",
    "lemma14_holds",
    "lemma14_grid",
    "lattice_thetas",
    "analytic_bounds",
]


def phi_density(theta) -> mpmath.mpf:
    theta = to_mpf(theta)
    return mpmath.exp(-theta ** 2 / 2) / mpmath.sqrt(2 * mpmath.pi)


def phi_bar(theta) -> mpmath.mpf:
    """Standard normal upper tail"""
    return mpmath.erfc(to_mpf(theta) / mpmath.sqrt(2)) / 2


def phi_tail_bounds(theta) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """(phi(t) / (t + 1/t), phi(t) / t), sandwiching the normal tail for t > 0"""
    theta = to_mpf(theta)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    density = phi_density(theta)
    return density / (theta + 1 / theta), density / theta


def berry_esseen_bound(rho, n: int) -> mpmath.mpf:
    """(1 + rho^2) / (sqrt(1 - rho^2) sqrt(n)) for sums of centered noisy signs"""
    rho = check_rho(rho)
    if rho == 1:
        raise DomainError("rho must be < 1")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    r = to_mpf(rho)
    return (1 + r ** 2) / (mpmath.sqrt(1 - r ** 2) * mpmath.sqrt(n))


def petrov_factor(n: int, rho, theta, c=1, weight: int = None) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    Moderate-deviation correction for a sum of centered noisy signs

    Args:
        n: Number of coordinates
        rho: Correlation in [0, 1)
        theta: Deviation in standard units
        c: Caller-supplied constant in the error term
        weight: Sum of the underlying signs (defaults to n)

    Returns:
        (exp(theta^3 * S3 / (6 V^1.5)), (theta + 1) / (c sqrt(n))) where S3 is
        the summed third central moment and V the summed variance
    """
    rho = check_rho(rho)
    if rho == 1:
        raise DomainError("rho must be < 1")
    weight = n if weight is None else weight
    r = to_mpf(rho)
    third = -2 * r * (1 - r ** 2) * weight
    variance = (1 - r ** 2) * n
    theta = to_mpf(theta)
    factor = mpmath.exp(theta ** 3 * third / (6 * variance ** mpmath.mpf(1.5)))
    return factor, (theta + 1) / (to_mpf(c) * mpmath.sqrt(n))


def lemma14_holds(n: int, theta) -> bool:
    """Pr[B >= sqrt(n) theta] >= normal tail at theta"""
    threshold = mpmath.sqrt(n) * to_mpf(theta)
    t = first_admissible_at_least(n, threshold)
    exact = tail_mass(binomial_pmf(n), t)
    return to_mpf(exact) >= phi_bar(theta)


def lemma14_grid(n: int, thetas: Iterable) -> List:
    """Subset of thetas where the binomial tail dominates the normal tail"""
    return [theta for theta in thetas if lemma14_holds(n, theta)]


def lattice_thetas(n: int, max_theta) -> List[Fraction]:
    """theta = t / sqrt(n) for admissible t in [0, sqrt(n) max_theta], kept exact when n is square"""
    root = mpmath.sqrt(n)
    out = []
    t = first_admissible_at_least(n, 0)
    while t <= root * to_mpf(max_theta):
        r = int(root)
        out.append(Fraction(t, r) if r * r == n else to_mpf(t) / root)
        t += 2
    return out


ANALYTIC_BOUNDS = ("fact2", "stirling", "be", "petrov", "phi_tail", "bernstein_noise")


def _require(params: ParamSet, *names: str) -> None:
    missing = [name for name in names if getattr(params, name) is None]
    if missing:
        raise DomainError(f"missing parameters: {', '.join(missing)}")


def analytic_bounds(name: str, params: ParamSet):
    """
    Evaluate one closed-form bound by name

    Args:
        name: fact2 (n, k, t), stirling (n, a), be (rho, n),
            petrov (n, rho, theta, c), phi_tail (theta),
            bernstein_noise (n, rho, t as the deviation s, c)
        params: Parameter set holding the named fields

    Returns:
        An mpmath value, or a pair for petrov and phi_tail
    """
    if name == "fact2":
        _require(params, "n", "k", "t")
        return fact2_bound(params.n, params.k, params.t)
    if name == "stirling":
        _require(params, "n", "a")
        return stirling_point_bound(params.n, params.a)
    if name == "be":
        _require(params, "n", "rho")
        return berry_esseen_bound(params.rational("rho"), params.n)
    if name == "petrov":
        _require(params, "n", "rho", "theta")
        c = params.rational("c") if params.c is not None else 1
        return petrov_factor(params.n, params.rational("rho"), params.rational("theta"), c)
    if name == "phi_tail":
        _require(params, "theta")
        return phi_tail_bounds(params.rational("theta"))
    if name == "bernstein_noise":
        _require(params, "n", "rho", "t")
        c = params.rational("c") if params.c is not None else Fraction(1, 8)
        return bernstein_noise_bound(params.n, params.rational("rho"), params.t, c)
    raise DomainError(f"bound must be one of {ANALYTIC_BOUNDS}, got {name!r}")
