from fractions import Fraction

import pytest

from src.config import get_settings, reset_settings
from src.core.weights import (
    WeightPMF,
    binomial_pmf,
    check_stirling,
    complement,
    interval_mass,
    is_k_uniform,
    lower_tail_mass,
    mixture,
    moments,
    slice_pmf,
    tail_mass,
    two_sided_tail_mass,
)
from src.utils.errors import DegenerateInputError, DimensionMismatchError, DomainError, LabError, ParityError
from src.utils.rationals import at_most, format_rational, to_fraction
from tests import oracles

SKEWED = WeightPMF.from_masses(4, {-2: Fraction(1, 3), 0: Fraction(1, 2), 4: Fraction(1, 6)})


def test_binomial_masses_and_moments():
    b4 = binomial_pmf(4)
    assert b4[2] == Fraction(1, 4)
    assert b4[1] == 0
    assert moments(b4, 4) == (0, 4, 0, 40)
    assert tail_mass(b4, 2) == Fraction(5, 16)


@pytest.mark.parametrize("n", range(1, 13))
def test_binomial_matches_string_enumeration(n):
    law = oracles.string_law(binomial_pmf(n))
    assert all(p == Fraction(1, 2 ** n) for p in law.values())
    assert oracles.moments(law, 4) == moments(binomial_pmf(n), 4)
    for t in range(-n - 1, n + 2):
        assert oracles.tail(law, t) == tail_mass(binomial_pmf(n), t)
    for k in range(1, min(2, n) + 1):
        assert is_k_uniform(binomial_pmf(n), k) and oracles.is_k_wise_uniform(law, k)


@pytest.mark.parametrize("n", range(1, 13))
def test_slices_match_string_enumeration(n):
    for t in sorted({n, n - 2, n % 2}):
        pmf = slice_pmf(n, t)
        law = oracles.string_law(pmf)
        assert oracles.weight_law(law) == pmf.masses
        for s in range(-n - 1, n + 2):
            assert oracles.tail(law, s) == tail_mass(pmf, s)
        for k in range(1, min(2, n) + 1):
            assert is_k_uniform(pmf, k) == oracles.is_k_wise_uniform(law, k)


def test_k_uniform_matches_parity_enumeration():
    law = oracles.string_law(SKEWED)
    assert is_k_uniform(SKEWED, 2)
    assert oracles.is_k_wise_uniform(law, 2)
    assert not is_k_uniform(SKEWED, 3)
    assert not oracles.is_k_wise_uniform(law, 3)


def test_slice_is_not_one_uniform_off_center():
    assert not is_k_uniform(slice_pmf(4, 2), 1)
    assert is_k_uniform(slice_pmf(4, 0), 1)
    assert is_k_uniform(binomial_pmf(7), 7)


def test_tail_variants():
    b4 = binomial_pmf(4)
    assert lower_tail_mass(b4, -2) == Fraction(5, 16)
    assert two_sided_tail_mass(b4, 2) == Fraction(10, 16)
    assert interval_mass(b4, -2, 2) == Fraction(14, 16)
    assert interval_mass(b4, 3, 1) == 0
    assert tail_mass(b4, Fraction(3, 2)) == Fraction(5, 16)


def test_complement_mirrors_tails():
    flipped = complement(SKEWED)
    assert flipped[-4] == Fraction(1, 6)
    assert complement(flipped) == SKEWED
    for t in range(-5, 6):
        assert lower_tail_mass(flipped, -t) == tail_mass(SKEWED, t)
    assert is_k_uniform(flipped, 2)


def test_mixture_of_opposite_slices():
    mixed = mixture([slice_pmf(4, 4), slice_pmf(4, -4)], [Fraction(1, 2), Fraction(1, 2)])
    assert mixed.support == (-4, 4)
    assert is_k_uniform(mixed, 1)
    assert not is_k_uniform(mixed, 2)


def test_mixture_validation():
    with pytest.raises(DomainError):
        mixture([slice_pmf(4, 4), slice_pmf(4, 0)], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(DimensionMismatchError):
        mixture([slice_pmf(4, 4), slice_pmf(2, 0)], [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(DegenerateInputError):
        mixture([], [])


def test_invalid_weight_laws():
    with pytest.raises(ParityError):
        WeightPMF.from_masses(4, {1: 1})
    with pytest.raises(ParityError):
        slice_pmf(4, 6)
    with pytest.raises(DomainError):
        WeightPMF.from_masses(4, {0: Fraction(1, 2)})
    with pytest.raises(DomainError):
        WeightPMF.from_masses(4, {0: Fraction(3, 2), 2: Fraction(-1, 2)})
    with pytest.raises(DegenerateInputError):
        WeightPMF.from_masses(4, {})
    with pytest.raises(DomainError):
        is_k_uniform(binomial_pmf(4), 5)


def test_from_masses_normalize_and_zero_drop():
    pmf = WeightPMF.from_masses(4, {0: 2, 2: 2, 4: 0}, normalize=True)
    assert pmf.support == (0, 2)
    assert pmf[0] == Fraction(1, 2)


@pytest.mark.parametrize("a", [0, 2, 4, 6, 10])
def test_stirling_point_bound(a):
    ok, exact, bound = check_stirling(10, a)
    assert ok
    assert exact == binomial_pmf(10)[a]


def test_stirling_needs_even_n():
    with pytest.raises(DomainError):
        check_stirling(9, 1)


def test_rationals_reject_floats():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction("0.25") == Fraction(1, 4)
    with pytest.raises(DomainError):
        to_fraction(0.5)
    with pytest.raises(DomainError):
        to_fraction("a/b")
    assert at_most(Fraction(1, 3), Fraction(1, 3))
    assert not at_most(Fraction(1, 3) + Fraction(1, 10 ** 20), Fraction(1, 3))


def test_format_rational_keeps_denominator():
    assert format_rational(1) == "1/1"
    assert format_rational(0) == "0/1"
    assert format_rational(Fraction(-2, 4)) == "-1/2"
    assert format_rational("6/4") == "3/2"


def test_errors_are_value_errors():
    assert issubclass(LabError, ValueError)
    with pytest.raises(ValueError):
        slice_pmf(3, 0)


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("LAB_THREADS", "3")
    monkeypatch.setenv("LAB_VERIFY_SUITES", "core,lp")
    reset_settings()
    try:
        settings = get_settings()
        assert settings.threads == 3
        assert settings.verify_suites == ["core", "lp"]
    finally:
        monkeypatch.delenv("LAB_THREADS")
        monkeypatch.delenv("LAB_VERIFY_SUITES")
        reset_settings()


def test_settings_expand_all(monkeypatch):
    monkeypatch.setenv("LAB_VERIFY_SUITES", "all")
    reset_settings()
    try:
        assert "gaussmix" in get_settings().verify_suites
    finally:
        monkeypatch.delenv("LAB_VERIFY_SUITES")
        reset_settings()
