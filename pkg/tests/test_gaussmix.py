from fractions import Fraction

import mpmath
import numpy as np
import pytest

from src.gaussmix.checkers import (
    chebyshev_extremal_check,
    coppersmith_check,
    erdelyi_check,
    euler_product_lower,
    random_rational_poly,
    series_lower_check,
)
from src.gaussmix.hankel import (
    det_mk,
    exponential_sum,
    fit_exponential_sum,
    gapmiddle_lower,
    gaussian_kernel,
    mk_matrix,
)
from src.gaussmix.mixture import GaussMixture, best_mixture_fit, grid, normal_vs_mixture_alpha, sup_distance
from src.gaussmix.vandermonde import (
    elementary_symmetric,
    elementary_symmetric_quotient_check,
    inverse_entry_bound_check,
    qbinomial,
    vandermonde_power_count_check,
)
from src.lp.polynomial import UnivariatePoly, chebyshev_t
from src.utils.errors import DomainError


def test_mk_matrix_layout():
    matrix = mk_matrix(lambda x: Fraction(x), 2)
    assert matrix.entries == ((-2, -1, 0), (-1, 0, 1), (0, 1, 2))


def test_det_mk_small_cases():
    assert det_mk(exponential_sum([3], [2]), 1) == 0
    assert det_mk(gaussian_kernel(2), 1) == 3
    assert det_mk(lambda x: Fraction(1), 0) == 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_exponential_sums_are_singular(k):
    rng = np.random.default_rng(k)
    for terms in range(1, k + 1):
        coefficients = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(terms)]
        bases = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 5))) for _ in range(terms)]
        assert det_mk(exponential_sum(coefficients, bases), k) == 0


def test_gaussian_kernel_is_nonsingular():
    for k in range(1, 5):
        assert det_mk(gaussian_kernel(Fraction(3, 2)), k) != 0


def test_exponential_sum_rejects_nonpositive_bases():
    with pytest.raises(DomainError):
        exponential_sum([1], [0])


def test_inverse_entry_bounds():
    report = inverse_entry_bound_check(1, 2)
    assert report.passed
    assert report.max_entry == Fraction(2, 3)
    for k in range(2, 5):
        assert inverse_entry_bound_check(k, Fraction(3, 2)).passed
    with pytest.raises(DomainError):
        inverse_entry_bound_check(2, 1)


def test_qbinomial():
    assert qbinomial(2, 1).coeffs == (1, 1)
    assert qbinomial(3, 2).coeffs == (1, 1, 1)
    assert qbinomial(4, 0).coeffs == (1,)
    assert sum(qbinomial(4, 2).coeffs) == 6
    with pytest.raises(DomainError):
        qbinomial(2, 3)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_vandermonde_power_count(k):
    report = vandermonde_power_count_check(k)
    assert report.passed
    assert len(report.entries) == (k + 1) ** 2


def test_elementary_symmetric_quotients():
    assert elementary_symmetric([Fraction(1), Fraction(2), Fraction(3)], 2) == 11
    assert elementary_symmetric_quotient_check([1, 2, 3]).passed
    report = elementary_symmetric_quotient_check([Fraction(1, 2), 3, -1, 5], pairs=[(1, 1), (2, 3), (4, 2)])
    assert report.passed
    assert report.checked == 3
    with pytest.raises(DomainError):
        elementary_symmetric_quotient_check([1, 1])


def test_gapmiddle_lower_value():
    assert mpmath.almosteq(gapmiddle_lower(1, 1, 1), (1 - mpmath.exp(-2)) / 8)
    assert mpmath.almosteq(gapmiddle_lower(1, 1, 1), mpmath.mpf("0.10808309"), 1e-7)
    with pytest.raises(DomainError):
        gapmiddle_lower(0, 1, 1)


def test_exponential_fit_respects_the_gap():
    for k in (1, 2):
        fit = fit_exponential_sum(k, 1, 1, starts=4, seed=0)
        assert fit.gap > gapmiddle_lower(k, 1, 1)
        assert len(fit.bases) == k


def test_grid_contains_zero():
    xs = grid(1.0, 0.25)
    assert len(xs) == 9
    assert xs[4] == 0


def test_sup_distance():
    assert sup_distance(GaussMixture(1, (0.0,), (1.0,), 1.0)) == 0
    shifted = sup_distance(GaussMixture(1, (0.0,), (1.0,), 0.75))
    exact = float((1 / mpmath.sqrt(2 * mpmath.pi)) * (1 / mpmath.sqrt(mpmath.mpf(3) / 4) - 1))
    assert abs(shifted - exact) < 1e-9


def test_best_mixture_fit_single_component():
    exact = float((1 / mpmath.sqrt(2 * mpmath.pi)) * (1 / mpmath.sqrt(mpmath.mpf(3) / 4) - 1))
    fit = best_mixture_fit(1, 0.75, starts=4, seed=0)
    assert fit.distance <= exact + 1e-6
    assert fit.mixture.k == 1


@pytest.mark.slow
def test_more_components_fit_better():
    one = best_mixture_fit(1, 0.5, starts=4, seed=0)
    three = best_mixture_fit(3, 0.5, starts=8, seed=0)
    assert three.distance < one.distance


def test_mixture_validation():
    with pytest.raises(DomainError):
        GaussMixture(2, (0.0, 1.0), (0.5, 0.6), 1.0)
    with pytest.raises(DomainError):
        best_mixture_fit(1, 1.5)
    assert normal_vs_mixture_alpha(0.5) == 0.5


def test_erdelyi_check():
    one = UnivariatePoly((Fraction(1),))
    report = erdelyi_check(one, 4, 2)
    assert report.passed and report.applicable
    assert report.lhs == 1 and report.rhs == 2

    bad = erdelyi_check(one, 4, 5)
    assert not bad.hypothesis_ok
    assert not bad.conclusion_failed

    vacuous = erdelyi_check(UnivariatePoly.monomial(20), 4, 1)
    assert not vacuous.applicable
    assert vacuous.passed


def test_erdelyi_on_random_polynomials():
    rng = np.random.default_rng(7)
    for _ in range(200):
        degree = int(rng.integers(0, 7))
        m = int(rng.integers(32, 81))
        scale = Fraction(int(rng.integers(16, m + 1)), 16)
        assert not erdelyi_check(random_rational_poly(rng, degree), m, scale).conclusion_failed


def test_coppersmith_check():
    line = UnivariatePoly((Fraction(0), Fraction(1, 12)))
    report = coppersmith_check(line, 12)
    assert report.passed
    assert mpmath.almosteq(report.lhs, 1)
    assert not coppersmith_check(line * 2, 12).hypothesis_ok
    assert not coppersmith_check(chebyshev_t(3), 20).hypothesis_ok


def test_chebyshev_extremal_check():
    report = chebyshev_extremal_check(chebyshev_t(2), 2)
    assert report.passed
    assert report.lhs == 7
    assert report.rhs == 16
    for degree in range(6):
        for s in (Fraction(1), Fraction(-3, 2), Fraction(4)):
            assert chebyshev_extremal_check(chebyshev_t(degree), s).passed
    assert not chebyshev_extremal_check(chebyshev_t(2), Fraction(1, 2)).hypothesis_ok
    assert not chebyshev_extremal_check(chebyshev_t(2) * 2, 2).hypothesis_ok


def test_series_lower_bound():
    report = series_lower_check(Fraction(1, 2))
    assert report.passed
    assert mpmath.almosteq(report.lhs, mpmath.mpf("0.288788095086602"), 1e-12)
    assert mpmath.almosteq(report.rhs, mpmath.exp(-mpmath.pi ** 2 / 3))
    lower, terms = euler_product_lower(Fraction(9, 10))
    assert terms > 0 and 0 < lower < 1
    with pytest.raises(DomainError):
        euler_product_lower(0)


def test_random_polynomials_have_exact_degree():
    rng = np.random.default_rng(0)
    for degree in range(6):
        assert random_rational_poly(rng, degree).degree == degree
