"""Separation experiments between smoothed small-bias laws and the binomial.

thm8   concentrated k-uniform input through the pipeline, smoothed; the
       binomial has the heavier upper tail at some threshold
thm9   anticoncentrated input (extremal tail at t / rho), smoothed, beats
       every k'-uniform law at t; the k'-uniform side is the exact LP max
thm10  a two-slice mixture, smoothed, differs from the binomial on an interval
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Tuple

import mpmath
import pandas as pd

from src.core.weights import WeightPMF, binomial_pmf, first_admissible_at_least, slice_mixture, tail_mass
from src.distinguish.advantage import advantage, best_abs_threshold, best_interval, best_threshold
from src.lp.constructions import MAX_TAIL, construct_k_uniform, extremal_tail, slab_filter
from src.models.schemas import ParamSet, SeparationReportRecord
from src.noise.kernels import smooth
from src.transform.pipeline import bu_to_sb
from src.utils.errors import DomainError, InfeasibleError
from src.utils.logger import get_logger
from src.utils.rationals import format_rational, is_rational, to_mpf

logger = get_logger(__name__)

SLAB_COEFFICIENT = 10
CONCENTRATION_COEFFICIENT = 21

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "thm8": {"n": 64, "k": 2, "rho": "1/2", "beta": "1", "c": "1"},
    "thm9": {"n": 60, "k": 2, "k_prime": 4, "rho": "1/2", "t": 30, "lift": "1", "c": "1"},
    "thm10": {"n": 16, "k": 2, "rho": "1/2", "weights": [-4, 4], "c": "1"},
}
SCENARIOS = tuple(DEFAULTS)


def _render_extra(value) -> str:
    return format_rational(value) if is_rational(value) else str(value)


@dataclass(frozen=True)
class SeparationReport:
    scenario: str
    params: ParamSet
    lhs: Fraction
    rhs: Fraction
    template: mpmath.mpf
    threshold: Optional[int] = None
    interval: Optional[Tuple[int, int]] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def advantage(self) -> Fraction:
        return self.lhs - self.rhs

    def to_record(self) -> SeparationReportRecord:
        return SeparationReportRecord(
            scenario=self.scenario,
            params=self.params,
            threshold=self.threshold,
            interval=list(self.interval) if self.interval else None,
            lhs=format_rational(self.lhs),
            rhs=format_rational(self.rhs),
            advantage=format_rational(self.advantage),
            template=mpmath.nstr(self.template, 15),
            extras={key: _render_extra(value) for key, value in self.extras.items()},
        )


def concentrated_input(n: int, k: int) -> WeightPMF:
    """2k-uniform law on the slab |w| <= 10 sqrt(kn) with the smallest next even moment"""
    if 2 * k >= n:
        raise DomainError(f"need 2k < n, got n={n}, k={k}")
    e = 2 * k + 2
    radius = SLAB_COEFFICIENT * mpmath.sqrt(k * n)
    solution = construct_k_uniform(n, 2 * k, slab_filter(radius), objective=lambda w: Fraction(w) ** e, sense="min")
    if solution.primal is None:
        raise InfeasibleError(f"no {2 * k}-uniform law on the slab (n={n})")
    return solution.primal


def thm8_law(n: int, k: int, rho: Fraction) -> WeightPMF:
    """Smoothed pipeline output of the concentrated input"""
    return smooth(bu_to_sb(concentrated_input(n, k), 2 * k), rho)


def beta_threshold(n: int, k: int, rho: Fraction, beta) -> int:
    if rho == 0:
        raise DomainError("rho must be positive")
    return first_admissible_at_least(n, to_mpf(beta) * mpmath.sqrt(n * k) / to_mpf(rho))


def smallest_passing_beta(n: int, k: int, rho, betas: Iterable) -> Optional[Fraction]:
    """Smallest beta whose threshold beta sqrt(nk) / rho gives a positive advantage"""
    rho = Fraction(rho)
    smoothed, b = thm8_law(n, k, rho), binomial_pmf(n)
    for beta in sorted(Fraction(x) for x in betas):
        if advantage(b, smoothed, beta_threshold(n, k, rho, beta)) > 0:
            return beta
    return None


def _thm8(params: ParamSet) -> SeparationReport:
    n, k, rho = params.n, params.k, params.rational("rho")
    if rho == 0:
        raise DomainError("rho must be positive")
    source = concentrated_input(n, k)
    pipeline_out = bu_to_sb(source, 2 * k)
    smoothed = smooth(pipeline_out, rho)
    b = binomial_pmf(n)
    t, _ = best_threshold(b, smoothed)
    t_beta = beta_threshold(n, k, rho, params.rational("beta"))
    radius = max(abs(w) for w in pipeline_out.support)
    template = mpmath.power(2, -to_mpf(params.rational("c")) * k / to_mpf(rho) ** 2)
    return SeparationReport(
        scenario="thm8",
        params=params,
        threshold=t,
        lhs=tail_mass(b, t),
        rhs=tail_mass(smoothed, t),
        template=template,
        extras={
            "beta_threshold": t_beta,
            "beta_advantage": advantage(b, smoothed, t_beta),
            "support_radius": radius,
            "concentrated": radius <= CONCENTRATION_COEFFICIENT * mpmath.sqrt(k * n),
        },
    )


def _thm9(params: ParamSet) -> SeparationReport:
    n, k, k_prime, rho = params.n, params.k, params.k_prime, params.rational("rho")
    if rho == 0:
        raise DomainError("rho must be positive")
    if k_prime > n:
        raise DomainError(f"k' must not exceed n, got {k_prime}")
    t = params.t if params.t is not None else first_admissible_at_least(n, mpmath.sqrt(k_prime * n))
    lifted = min(first_admissible_at_least(n, to_mpf(params.rational("lift")) * t / to_mpf(rho)), n)

    anchor = extremal_tail(n, k, lifted, MAX_TAIL)
    if anchor.primal is None:
        raise InfeasibleError(f"no {k}-uniform law for the anticoncentrated input")
    source = bu_to_sb(anchor.primal, k) if k >= 2 else anchor.primal
    smoothed = smooth(source, rho)

    rival = extremal_tail(n, k_prime, t, MAX_TAIL)
    r = to_mpf(rho)
    template = (to_mpf(params.rational("c")) * r ** 2 / mpmath.log(1 / r)) ** (mpmath.mpf(k) / 2) if rho < 1 else mpmath.mpf(0)
    return SeparationReport(
        scenario="thm9",
        params=params,
        threshold=t,
        lhs=tail_mass(smoothed, t),
        rhs=rival.value,
        template=template,
        extras={"lifted_threshold": lifted, "anchor_tail": anchor.value},
    )


def _thm10(params: ParamSet) -> SeparationReport:
    n, rho, weights = params.n, params.rational("rho"), params.weights
    if not weights:
        raise DomainError("thm10 needs the slice weights of the mixture")
    mixture = slice_mixture(n, {w: Fraction(1, len(weights)) for w in weights})
    smoothed = smooth(mixture, rho)
    b = binomial_pmf(n)
    (a, c), _ = best_interval(b, smoothed, absolute=True)
    lhs = sum((p for w, p in b.items if a <= w <= c), Fraction(0))
    rhs = sum((p for w, p in smoothed.items if a <= w <= c), Fraction(0))
    if lhs < rhs:
        lhs, rhs = rhs, lhs
    t, gap = best_abs_threshold(b, smoothed)
    template = mpmath.power(2, -to_mpf(params.rational("c")) * params.k / to_mpf(rho)) if rho > 0 else mpmath.mpf(0)
    return SeparationReport(
        scenario="thm10",
        params=params,
        interval=(a, c),
        lhs=lhs,
        rhs=rhs,
        template=template,
        extras={"best_threshold": t, "threshold_gap": gap},
    )


_RUNNERS = {"thm8": _thm8, "thm9": _thm9, "thm10": _thm10}


def run_separation(scenario: str, params: Optional[ParamSet] = None) -> SeparationReport:
    """
    Run one separation scenario with exact masses

    Args:
        scenario: thm8, thm9 or thm10
        params: Overrides for the scenario defaults

    Returns:
        SeparationReport with advantage = lhs - rhs
    """
    if scenario not in _RUNNERS:
        raise DomainError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    merged = (params or ParamSet()).merged(DEFAULTS[scenario])
    report = _RUNNERS[scenario](merged)
    marker = "✅" if report.advantage > 0 else "⚠️"
    logger.info(f"{marker} {scenario}: advantage {float(report.advantage):.3e}")
    return report


def separation_sweep(scenario: str, overrides: Iterable[ParamSet]) -> pd.DataFrame:
    """CSV-ready table with columns scenario, n, k, rho, t, lhs, rhs, advantage, template"""
    rows = []
    for params in overrides:
        report = run_separation(scenario, params)
        rows.append({
            "scenario": scenario,
            "n": report.params.n,
            "k": report.params.k,
            "rho": report.params.rho,
            "t": report.threshold if report.threshold is not None else "{}..{}".format(*report.interval),
            "lhs": format_rational(report.lhs),
            "rhs": format_rational(report.rhs),
            "advantage": format_rational(report.advantage),
            "template": mpmath.nstr(report.template, 15),
        })
    return pd.DataFrame(rows, columns=["scenario", "n", "k", "rho", "t", "lhs", "rhs", "advantage", "template"])
