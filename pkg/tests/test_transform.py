from fractions import Fraction

import pytest

from src.core.weights import WeightPMF, binomial_pmf, is_k_uniform, slice_pmf, tail_mass
from src.lp.constructions import construct_k_uniform, extremal_tail, slab_filter, thm4_threshold
from src.transform.pipeline import (
    HIGH,
    LOW,
    MIDDLE,
    bu_to_sb,
    case_bound,
    case_of,
    certify_bias,
    interval_property_check,
    noise_rounds,
    pipeline_report,
)
from src.utils.errors import DimensionMismatchError, DomainError, PreconditionError


def _extremal_input(n, k):
    return extremal_tail(n, k, thm4_threshold(n, k)).primal


def test_case_bounds():
    assert case_of(60, 4, 3) == LOW
    assert case_of(60, 4, 10) == MIDDLE
    assert case_of(60, 4, 58) == HIGH
    assert case_bound(60, 4, 4) == 0
    assert case_bound(60, 4, 10) == Fraction(4, 15)
    assert case_bound(60, 4, 58) == Fraction(1, 225)
    assert noise_rounds(5) == 2


@pytest.mark.parametrize("n,k", [(60, 4), (100, 4)])
def test_pipeline_certifies_extremal_inputs(n, k):
    source = _extremal_input(n, k)
    report = pipeline_report(source, k)
    assert report.support_ok
    assert report.interval_ok
    assert report.certification.passed
    assert len(report.result) <= (k + 1) * (2 * (k // 2) + 1)
    assert all(report.certification.profile[ell] == 0 for ell in range(1, k + 1))
    assert tail_mass(report.result, thm4_threshold(n, k) - k) >= tail_mass(source, thm4_threshold(n, k))


@pytest.mark.slow
def test_pipeline_certifies_larger_k():
    report = pipeline_report(_extremal_input(200, 6), 6)
    assert report.certification.passed
    assert report.interval_ok


def test_pipeline_keeps_slab_inputs_in_range():
    n, k = 100, 4
    source = construct_k_uniform(n, k, slab_filter(40)).primal
    out = bu_to_sb(source, k)
    assert is_k_uniform(out, k)
    assert max(abs(w) for w in out.support) <= 40 + k


def test_pipeline_rejects_bad_input():
    with pytest.raises(DomainError):
        bu_to_sb(binomial_pmf(10), 1)
    with pytest.raises(PreconditionError):
        bu_to_sb(slice_pmf(10, 4), 2)


def test_certify_binomial():
    certification = certify_bias(binomial_pmf(20), 4)
    assert certification.passed
    assert not certification.failures()
    assert [r.case for r in certification.rows[:5]] == [LOW] * 4 + [MIDDLE]
    assert certification.rows[-1].case == HIGH


def test_certify_reports_failures():
    certification = certify_bias(slice_pmf(20, 20), 4)
    assert not certification.passed
    assert certification.failures()[0].ell == 1


def test_interval_property():
    pmf = WeightPMF.from_masses(6, {-2: Fraction(1, 2), 2: Fraction(1, 2)})
    assert interval_property_check(pmf, pmf, 0)
    assert interval_property_check(pmf, slice_pmf(6, 0), 2)
    assert not interval_property_check(pmf, slice_pmf(6, 0), 0)
    with pytest.raises(DimensionMismatchError):
        interval_property_check(pmf, binomial_pmf(4), 2)


def test_binomial_interval_against_sparsified_law():
    report = pipeline_report(binomial_pmf(10), 2)
    assert report.sparse == WeightPMF.from_masses(10, {-10: Fraction(1, 20), 0: Fraction(9, 10), 10: Fraction(1, 20)})
    assert report.result == WeightPMF.from_masses(10, {
        -10: Fraction(1, 40), -8: Fraction(1, 40), -2: Fraction(9, 40), 0: Fraction(9, 20),
        2: Fraction(9, 40), 8: Fraction(1, 40), 10: Fraction(1, 40),
    })
    assert report.interval_ok
    # Pr[B = 6] = 45/1024 but only 1/40 of the output lands in [4, 8]
    assert not report.source_interval_ok


def test_binomial_interval_small_n():
    report = pipeline_report(binomial_pmf(8), 2)
    assert report.sparse == WeightPMF.from_masses(8, {-8: Fraction(1, 16), 0: Fraction(7, 8), 8: Fraction(1, 16)})
    assert report.interval_ok
    assert report.source_interval_ok
    assert interval_property_check(binomial_pmf(8), bu_to_sb(binomial_pmf(8), 2), 2)
