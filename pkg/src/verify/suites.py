"""Acceptance suites behind `verify --suite`.

Each check is a zero-argument function returning a CheckReport. Checks
register themselves per suite; run_suite executes them (optionally on a
thread pool) and returns the reports in registration order.
"""
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

import mpmath
import numpy as np

from src.config import VERIFY_SUITES, get_settings
from src.core.weights import (
    WeightPMF,
    admissible_weights,
    binomial_pmf,
    check_stirling,
    complement,
    interval_mass,
    is_k_uniform,
    moments,
    slice_pmf,
    tail_mass,
)
from src.distinguish.analytic import lattice_thetas, lemma14_grid, phi_bar, phi_tail_bounds
from src.distinguish.scenarios import concentrated_input, run_separation
from src.gaussmix.checkers import (
    chebyshev_extremal_check,
    coppersmith_check,
    erdelyi_check,
    random_rational_poly,
    series_lower_check,
)
from src.gaussmix.hankel import det_mk, exponential_sum, fit_exponential_sum, gapmiddle_lower
from src.gaussmix.mixture import GaussMixture, best_mixture_fit, sup_distance
from src.gaussmix.vandermonde import inverse_entry_bound_check, vandermonde_power_count_check
from src.krawtchouk.bias import bias_profile, lemma13_bound, slice_bias
from src.lp.constructions import (
    MAX_TAIL,
    MAX_TWO_SIDED,
    construct_k_uniform,
    extremal_tail,
    fact2_bound,
    sandwich_ok,
    slab_filter,
    sparsify,
    thm3_construction,
    thm4_lower_bound,
    thm4_threshold,
)
from src.lp.polynomial import chebyshev_t
from src.lp.vertices import vertex_optimum
from src.models.schemas import CheckReport
from src.noise.kernels import bernstein_noise_bound, noise_deviation_tail, replace_noise, smooth
from src.transform.pipeline import bu_to_sb, pipeline_report
from src.utils.errors import LabError
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map
from src.utils.rationals import at_most, format_rational, is_rational, to_mpf

logger = get_logger(__name__)

Check = Callable[[], CheckReport]
_REGISTRY: Dict[str, List[Check]] = {name: [] for name in VERIFY_SUITES}


def check(suite: str):
    """Register a check under a suite"""
    def decorator(func: Check) -> Check:
        _REGISTRY[suite].append(func)
        return func
    return decorator


def _report(name: str, passed: bool, **details) -> CheckReport:
    rendered = {k: format_rational(v) if is_rational(v) else str(v) for k, v in details.items()}
    return CheckReport(name=name, passed=bool(passed), details=rendered)


# core

@check("core")
def core_examples() -> CheckReport:
    b4 = binomial_pmf(4)
    passed = (
        binomial_pmf(1).masses == {-1: Fraction(1, 2), 1: Fraction(1, 2)}
        and b4[2] == Fraction(1, 4)
        and moments(b4, 4) == (0, 4, 0, 40)
        and tail_mass(b4, 2) == Fraction(5, 16)
        and not is_k_uniform(slice_pmf(2, 0), 2)
    )
    return _report("core.examples", passed)


@check("core")
def core_tail_identity() -> CheckReport:
    bad = []
    for n in range(1, 13):
        for pmf in (binomial_pmf(n), slice_pmf(n, n), slice_pmf(n, n - 2)):
            for t in admissible_weights(n):
                if tail_mass(pmf, t) + interval_mass(pmf, -n, t - 2) != 1:
                    bad.append((n, t))
    return _report("core.tail_identity", not bad, failures=bad[:5])


@check("core")
def core_stirling() -> CheckReport:
    bad = [(n, a) for n in range(2, 201, 2) for a in admissible_weights(n) if not check_stirling(n, a)[0]]
    return _report("core.stirling", not bad, failures=bad[:5])


@check("core")
def core_complement_uniformity() -> CheckReport:
    bad = []
    for n in range(2, 11):
        for k in (1, 2, 3):
            if k > n:
                continue
            solution = extremal_tail(n, k, n, MAX_TAIL)
            pmf = solution.primal
            for j in range(n + 1):
                if is_k_uniform(complement(pmf), j) != is_k_uniform(pmf, j):
                    bad.append((n, k, j))
    return _report("core.complement_uniformity", not bad, failures=bad[:5])


# krawtchouk

@check("krawtchouk")
def krawtchouk_examples() -> CheckReport:
    passed = (
        slice_bias(2, 0, 2) == -1
        and slice_bias(3, 1, 1) == Fraction(1, 3)
        and bias_profile(slice_pmf(2, 0)).biases == (1, 0, -1)
        and bias_profile(binomial_pmf(4)).max_bias() == 0
    )
    return _report("krawtchouk.examples", passed)


@check("krawtchouk")
def krawtchouk_slice_bound() -> CheckReport:
    slack = get_settings().bound_slack
    bad = []
    for n in range(1, 41):
        for t in admissible_weights(n):
            for ell in range(n + 1):
                bias = slice_bias(n, t, ell)
                if abs(bias) != abs(slice_bias(n, t, n - ell)):
                    bad.append(("reflection", n, t, ell))
                elif 2 * ell <= n and not at_most(abs(bias), lemma13_bound(n, t, ell), slack):
                    bad.append(("bound", n, t, ell))
    return _report("krawtchouk.slice_bound", not bad, failures=bad[:5])


# lp

@check("lp")
def lp_examples() -> CheckReport:
    passed = (
        extremal_tail(4, 2, 4).value == Fraction(1, 6)
        and extremal_tail(4, 4, 4).value == Fraction(1, 16)
        and extremal_tail(4, 2, 6).value == 0
        and not construct_k_uniform(4, 2, lambda w: w == 4).is_optimal
    )
    return _report("lp.examples", passed)


@check("lp")
def lp_vertex_enumeration() -> CheckReport:
    bad = []
    for n in (2, 4, 6, 8, 10):
        for k in range(1, min(3, n) + 1):
            for t in [-n - 2] + admissible_weights(n) + [n + 2]:
                if extremal_tail(n, k, t).value != vertex_optimum(n, k, lambda w: w >= t):
                    bad.append((n, k, t))
    return _report("lp.vertex_enumeration", not bad, failures=bad[:5])


@check("lp")
def lp_duality() -> CheckReport:
    bad = []
    for n in (20, 60, 100):
        for k in range(1, 5):
            for t in (thm4_threshold(n, k), n // 2, n):
                solution = extremal_tail(n, k, t)
                if not sandwich_ok(solution, t, n):
                    bad.append((n, k, t))
    return _report("lp.duality", not bad, failures=bad)


@check("lp")
def lp_tail_lower_bound() -> CheckReport:
    bad, checked = [], 0
    for n in (100, 400, 900):
        for k in (1, 2, 3):
            if k ** 3 * 9 > n:
                continue
            t = thm4_threshold(n, k)
            value = extremal_tail(n, k, t).value
            checked += 1
            if not at_most(thm4_lower_bound(n, k, t), value):
                bad.append((n, k, t))
    return _report("lp.tail_lower_bound", not bad, checked=checked, failures=bad)


@check("lp")
def lp_point_mass() -> CheckReport:
    bad = []
    for k in (1, 2):
        n = 800
        report = thm3_construction(n, k, thm4_threshold(n, k))
        slack_target = (Fraction(report.m, 4) - 1) * report.binomial_point / 2
        if not report.reaches_target or report.advantage < slack_target:
            bad.append((n, k))
    return _report("lp.point_mass", not bad, failures=bad)


@check("lp")
def lp_two_sided_tail() -> CheckReport:
    bad = []
    for n in (20, 40):
        for k in (1, 2):
            for t in admissible_weights(n):
                if t <= 0:
                    continue
                value = extremal_tail(n, 2 * k, t, MAX_TWO_SIDED).value
                if not at_most(value, fact2_bound(n, k, t)):
                    bad.append((n, k, t))
    return _report("lp.two_sided_tail", not bad, failures=bad[:5])


@check("lp")
def lp_sparsify() -> CheckReport:
    out = sparsify(binomial_pmf(8), 2)
    again = sparsify(binomial_pmf(8), 2)
    passed = len(out) <= 3 and is_k_uniform(out, 2) and out == again and set(out.support) <= set(binomial_pmf(8).support)
    return _report("lp.sparsify", passed, result=out)


# noise

@check("noise")
def noise_identities() -> CheckReport:
    bad = []
    for n in range(1, 13):
        for pmf in (slice_pmf(n, n), slice_pmf(n, n - 2), binomial_pmf(n)):
            if smooth(pmf, 1) != pmf or smooth(pmf, 0) != binomial_pmf(n):
                bad.append(("identity", n))
            if moments(smooth(pmf, Fraction(1, 3)), 1)[0] != Fraction(1, 3) * moments(pmf, 1)[0]:
                bad.append(("mean", n))
            for kernel in (lambda p: smooth(p, Fraction(2, 5)), lambda p: replace_noise(p, 2)):
                if complement(kernel(pmf)) != kernel(complement(pmf)):
                    bad.append(("complement", n))
    return _report("noise.identities", not bad, failures=bad[:5])


@check("noise")
def noise_composition() -> CheckReport:
    bad = []
    rho, rho_prime = Fraction(1, 2), Fraction(2, 3)
    for n in range(1, 21):
        pmf = slice_pmf(n, n)
        if smooth(smooth(pmf, rho), rho_prime) != smooth(pmf, rho * rho_prime):
            bad.append(n)
    return _report("noise.composition", not bad, failures=bad)


@check("noise")
def noise_deviation() -> CheckReport:
    bad = []
    for n in range(1, 21):
        for rho in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)):
            for w in admissible_weights(n):
                for s in range(1, n + 2):
                    exact = noise_deviation_tail(n, w, rho, s)
                    if not at_most(exact, bernstein_noise_bound(n, rho, s)):
                        bad.append((n, rho, w, s))
    return _report("noise.deviation_tail", not bad, failures=bad[:5])


# transform

def _extremal_input(n: int, k: int):
    return extremal_tail(n, k, thm4_threshold(n, k)).primal


@check("transform")
def transform_pipeline() -> CheckReport:
    bad = []
    for n, k in ((60, 4), (100, 4), (200, 6)):
        report = pipeline_report(_extremal_input(n, k), k)
        low_zero = all(report.certification.profile[ell] == 0 for ell in range(1, k + 1))
        if not (report.support_ok and report.interval_ok and report.certification.passed and low_zero):
            bad.append((n, k))
    return _report("transform.pipeline", not bad, failures=bad)


@check("transform")
def transform_binomial_interval() -> CheckReport:
    bad = []
    for n, k in ((8, 2), (10, 2), (12, 4), (20, 4)):
        report = pipeline_report(binomial_pmf(n), k)
        if not report.interval_ok:
            bad.append((n, k))
    return _report("transform.binomial_interval", not bad, failures=bad)


@check("transform")
def transform_slab() -> CheckReport:
    n, k = 100, 4
    source = construct_k_uniform(n, k, slab_filter(10 * mpmath.sqrt(k * n))).primal
    out = bu_to_sb(source, k)
    radius = max(abs(w) for w in out.support)
    return _report("transform.slab", radius ** 2 <= 441 * k * n, radius=radius)


@check("transform")
def transform_tail_shift() -> CheckReport:
    bad, tails = [], {}
    for n, k in ((60, 4), (100, 4)):
        source = _extremal_input(n, k)
        t = thm4_threshold(n, k)
        output = bu_to_sb(source, k)
        shifted = tail_mass(output, t - k)
        # unshifted tail is reported only
        tails[(n, k)] = tuple(format_rational(v) for v in (tail_mass(source, t), shifted, tail_mass(output, t)))
        if shifted < tail_mass(source, t):
            bad.append((n, k))
    return _report("transform.tail_shift", not bad, failures=bad, tails=tails)


# distinguish

@check("distinguish")
def distinguish_phi_tail() -> CheckReport:
    slack = get_settings().phi_slack
    bad = []
    for i in range(1, 61):
        theta = Fraction(i, 10)
        lower, upper = phi_tail_bounds(theta)
        value = phi_bar(theta)
        if not (lower <= value + slack and value <= upper + slack):
            bad.append(str(theta))
    return _report("distinguish.phi_tail", not bad, failures=bad)


@check("distinguish")
def distinguish_binomial_vs_normal() -> CheckReport:
    bad = []
    for n, max_theta in ((64, Fraction(5, 2)), (256, Fraction(3))):
        thetas = lattice_thetas(n, max_theta)
        if lemma14_grid(n, thetas) != thetas:
            bad.append(n)
    return _report("distinguish.binomial_vs_normal", not bad, failures=bad)


@check("distinguish")
def distinguish_separations() -> CheckReport:
    reports = {scenario: run_separation(scenario) for scenario in ("thm8", "thm9", "thm10")}
    advantages = {scenario: report.advantage for scenario, report in reports.items()}
    concentrated = WeightPMF.from_masses(64, {
        -14: Fraction(92, 637), -12: Fraction(1, 39), 0: Fraction(97, 147), 12: Fraction(1, 39), 14: Fraction(92, 637),
    })
    pinned = (
        concentrated_input(64, 2) == concentrated
        and reports["thm8"].extras["support_radius"] == 18
        and mpmath.almosteq(to_mpf(advantages["thm9"]), mpmath.mpf("2.257e-4"), rel_eps=mpmath.mpf("1e-3"))
        and advantages["thm10"] == Fraction(20496205, 2147483648)
    )
    passed = pinned and all(a > 0 for a in advantages.values())
    return _report("distinguish.separations", passed, **advantages)


# gaussmix

@check("gaussmix")
def gaussmix_singular() -> CheckReport:
    rng = np.random.default_rng(get_settings().seed)
    bad = []
    for k in range(1, 7):
        for terms in range(1, k + 1):
            coefficients = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(terms)]
            bases = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 5))) for _ in range(terms)]
            if det_mk(exponential_sum(coefficients, bases), k) != 0:
                bad.append((k, terms))
    return _report("gaussmix.singular", not bad, failures=bad)


@check("gaussmix")
def gaussmix_inverse_bounds() -> CheckReport:
    bad = [(k, str(q)) for k in range(1, 7) for q in (Fraction(3, 2), Fraction(2), Fraction(3))
           if not inverse_entry_bound_check(k, q).passed]
    return _report("gaussmix.inverse_bounds", not bad, failures=bad)


@check("gaussmix")
def gaussmix_power_count() -> CheckReport:
    bad = [k for k in range(0, 6) if not vandermonde_power_count_check(k).passed]
    return _report("gaussmix.power_count", not bad, failures=bad)


@check("gaussmix")
def gaussmix_sample_gap() -> CheckReport:
    bad = []
    for k in (1, 2, 3):
        fit = fit_exponential_sum(k, 1, 1)
        if fit.gap <= gapmiddle_lower(k, 1, 1):
            bad.append(k)
    return _report("gaussmix.sample_gap", not bad, failures=bad)


@check("gaussmix")
def gaussmix_mixture_distance() -> CheckReport:
    exact = float((1 / mpmath.sqrt(2 * mpmath.pi)) * (1 / mpmath.sqrt(mpmath.mpf(3) / 4) - 1))
    fit = best_mixture_fit(1, 0.75, starts=4)
    identical = sup_distance(GaussMixture(1, (0.0,), (1.0,), 1.0))
    return _report("gaussmix.mixture_distance", fit.distance <= exact + 1e-6 and identical == 0,
                   fit=fit.distance, identical=identical)


@check("gaussmix")
def gaussmix_polynomial_checkers() -> CheckReport:
    rng = np.random.default_rng(get_settings().seed)
    bad = []
    for _ in range(1000):
        degree = int(rng.integers(0, 7))
        m = int(rng.integers(32, 81))
        scale = Fraction(int(rng.integers(16, m + 1)), 16)
        report = erdelyi_check(random_rational_poly(rng, degree), m, scale)
        if report.conclusion_failed:
            bad.append(("erdelyi", degree, m))
    for _ in range(200):
        degree = int(rng.integers(1, 7))
        m = 3 * degree * degree + int(rng.integers(0, 41))
        poly = random_rational_poly(rng, degree)
        peak = max(abs(poly(Fraction(i))) for i in range(m + 1))
        if peak:
            poly = poly * (1 / peak)
        if coppersmith_check(poly, m).conclusion_failed:
            bad.append(("coppersmith", degree, m))
    for degree in range(0, 8):
        t = chebyshev_t(degree)
        for s in (Fraction(1), Fraction(3, 2), Fraction(-2), Fraction(5)):
            if not chebyshev_extremal_check(t, s).passed:
                bad.append(("chebyshev", degree, str(s)))
    for i in range(1, 10):
        if not series_lower_check(Fraction(i, 10)).passed:
            bad.append(("series", i))
    return _report("gaussmix.polynomial_checkers", not bad, failures=bad[:5])


def run_suite(name: str, threads: Optional[int] = None) -> List[CheckReport]:
    """Run one suite; a check that raises is reported as failed"""
    if name not in _REGISTRY:
        raise LabError(f"unknown suite {name!r}; choose from {VERIFY_SUITES}")

    def execute(func: Check) -> CheckReport:
        try:
            return func()
        except Exception as e:
            logger.error(f"❌ {func.__name__} raised: {e}")
            return CheckReport(name=f"{name}.{func.__name__}", passed=False, details={"error": str(e)})

    reports = ordered_map(execute, _REGISTRY[name], threads)
    for report in reports:
        if report.passed:
            logger.info(f"✅ {report.name}")
        else:
            logger.warning(f"❌ {report.name}: {report.details}")
    return reports


def run_suites(names: Optional[Iterable[str]] = None, threads: Optional[int] = None) -> List[CheckReport]:
    names = list(names) if names else get_settings().verify_suites
    if "all" in names:
        names = list(VERIFY_SUITES)
    reports: List[CheckReport] = []
    for name in names:
        reports.extend(run_suite(name, threads))
    failed = sum(1 for r in reports if not r.passed)
    logger.info(f"Verification finished: {len(reports) - failed} passed, {failed} failed")
    return reports
