from fractions import Fraction

import mpmath
import pytest

from src.core.weights import WeightPMF, admissible_weights, binomial_pmf, is_k_uniform, slice_pmf, tail_mass
from src.lp.constructions import (
    MAX_POINT,
    MAX_TWO_SIDED,
    SIGNED_GAP,
    construct_k_uniform,
    extremal_tail,
    fact2_bound,
    next_even_moment,
    residue_class_for,
    residue_filter,
    sandwich_ok,
    sandwich_sup_bound,
    slab_filter,
    sparsify,
    thm3_construction,
    thm4_lower_bound,
    thm4_threshold,
)
from src.lp.polynomial import UnivariatePoly, chebyshev_t
from src.lp.simplex import INFEASIBLE, UNBOUNDED, LPProblem, solve_exact_lp
from src.lp.vertices import vertex_laws, vertex_optimum
from src.utils.errors import DomainError, ParityError, PreconditionError
from src.utils.rationals import at_most


def _lp(rows, rhs, objective, sense="max"):
    return LPProblem(
        variables=tuple(range(len(objective))),
        rows=tuple(tuple(Fraction(a) for a in row) for row in rows),
        rhs=tuple(Fraction(b) for b in rhs),
        objective=tuple(Fraction(c) for c in objective),
        sense=sense,
    )


def test_simplex_small_programs():
    solution = solve_exact_lp(_lp([[1, 2, 1]], [4], [1, 1, 0]))
    assert solution.is_optimal
    assert solution.value == 4
    assert solution.values == (4, 0, 0)
    assert solution.duals == (1,)
    assert solution.primal is None

    assert solve_exact_lp(_lp([[1, -1]], [0], [1, 0])).status == UNBOUNDED
    assert solve_exact_lp(_lp([[1, 1]], [-1], [1, 0])).status == INFEASIBLE


def test_lp_problem_validation():
    with pytest.raises(DomainError):
        _lp([[1]], [1], [1], sense="up")
    with pytest.raises(ValueError):
        _lp([[1, 1]], [1], [1])


def test_extremal_tail_small_cases():
    solution = extremal_tail(4, 2, 4)
    assert solution.value == Fraction(1, 6)
    assert solution.primal == WeightPMF.from_masses(4, {-2: Fraction(1, 3), 0: Fraction(1, 2), 4: Fraction(1, 6)})
    assert solution.dual(Fraction(4)) == 1
    assert extremal_tail(4, 4, 4).value == Fraction(1, 16)
    assert extremal_tail(4, 2, 6).value == 0


SMALL_CASES = [(n, k) for n in (2, 4, 6, 8, 10) for k in (1, 2, 3) if k <= n] + [(9, 3)]


@pytest.mark.parametrize("n,k", SMALL_CASES)
def test_extremal_tail_matches_vertex_enumeration(n, k):
    for t in [-n - 2] + admissible_weights(n) + [n + 2]:
        solution = extremal_tail(n, k, t)
        assert solution.value == vertex_optimum(n, k, lambda w: w >= t)
        assert is_k_uniform(solution.primal, k)
        assert tail_mass(solution.primal, t) == solution.value
        assert sandwich_ok(solution, t, n)


def test_vertex_laws():
    laws = vertex_laws(4, 2)
    assert WeightPMF.from_masses(4, {-2: Fraction(1, 3), 0: Fraction(1, 2), 4: Fraction(1, 6)}) in laws
    assert all(is_k_uniform(law, 2) and len(law) <= 3 for law in laws)
    assert vertex_laws(2, 2) == (binomial_pmf(2),)
    assert vertex_optimum(4, 2, lambda w: w >= -4) == 1
    with pytest.raises(DomainError):
        vertex_laws(14, 2)
    with pytest.raises(DomainError):
        vertex_optimum(4, 2, lambda w: True, sense="up")


@pytest.mark.parametrize("n,k", [(6, 2), (8, 2)])
def test_point_and_two_sided_match_vertex_enumeration(n, k):
    for t in range(-n, n + 1, 2):
        assert extremal_tail(n, k, t, MAX_POINT).value == vertex_optimum(n, k, lambda w: w == t)
    for t in range(1, n + 1):
        assert extremal_tail(n, k, t, MAX_TWO_SIDED).value == vertex_optimum(n, k, lambda w: abs(w) >= t)


def test_signed_gap_matches_vertex_enumeration():
    n, k = 8, 2
    base = tail_mass(binomial_pmf(n), 4)
    upper = vertex_optimum(n, k, lambda w: w >= 4)
    lower = vertex_optimum(n, k, lambda w: w >= 4, sense="min")
    assert extremal_tail(n, k, 4, SIGNED_GAP).value == max(upper - base, base - lower)


@pytest.mark.parametrize("n,k", [(20, 1), (60, 2), (100, 4)])
def test_dual_certificates(n, k):
    for t in (thm4_threshold(n, k), n // 2, n):
        solution = extremal_tail(n, k, t)
        assert sandwich_ok(solution, t, n)
        assert solution.dual.expectation(binomial_pmf(n)) == solution.value
        observed, reference = sandwich_sup_bound(solution.dual, n, k, solution.value)
        assert observed >= 0
        assert reference > 0


def test_tail_lower_bound():
    for n, k in ((100, 1), (100, 2), (400, 3)):
        t = thm4_threshold(n, k)
        assert at_most(thm4_lower_bound(n, k, t), extremal_tail(n, k, t).value)
    assert thm4_threshold(100, 4) == 20
    assert thm4_threshold(99, 1) == 11


@pytest.mark.parametrize("n,k", [(20, 1), (30, 2)])
def test_two_sided_tail_below_fact2(n, k):
    for t in range(2, n + 1, 2):
        assert at_most(extremal_tail(n, 2 * k, t, MAX_TWO_SIDED).value, fact2_bound(n, k, t))


def test_fact2_value():
    assert mpmath.almosteq(fact2_bound(4, 1, 4), mpmath.sqrt(2) / (2 * mpmath.e))
    with pytest.raises(DomainError):
        fact2_bound(4, 1, 0)


def test_construct_on_residue_class():
    solution = construct_k_uniform(8, 2, residue_filter(4, 0))
    assert solution.is_optimal
    assert is_k_uniform(solution.primal, 2)
    assert all(w % 4 == 0 for w in solution.primal.support)


def test_construct_infeasible_support():
    assert construct_k_uniform(4, 2, residue_filter(8, 4)).status == INFEASIBLE
    assert not construct_k_uniform(4, 2, lambda w: w == 4).is_optimal


def test_construct_on_slab():
    solution = construct_k_uniform(40, 2, slab_filter(20))
    assert is_k_uniform(solution.primal, 2)
    assert max(abs(w) for w in solution.primal.support) <= 20


def test_sparsify_pushes_to_the_ends():
    out = sparsify(binomial_pmf(8), 2)
    assert out == WeightPMF.from_masses(8, {-8: Fraction(1, 16), 0: Fraction(7, 8), 8: Fraction(1, 16)})
    assert next_even_moment(2) == 4
    assert next_even_moment(3) == 4


def test_sparsify_preserves_small_support_and_checks_input():
    small = extremal_tail(8, 2, 6).primal
    assert sparsify(small, 2) is small
    with pytest.raises(PreconditionError):
        sparsify(slice_pmf(8, 2), 1)


@pytest.mark.parametrize("n,k", [(12, 2), (16, 3)])
def test_sparsify_stays_k_uniform(n, k):
    out = sparsify(binomial_pmf(n), k)
    assert len(out) <= k + 1
    assert is_k_uniform(out, k)


def test_residue_class_parity():
    assert residue_class_for(6, 2, 4) == (2, 2)
    assert residue_class_for(5, 2, 3) == (2, 5)
    with pytest.raises(ParityError):
        residue_class_for(5, 2, 4)


def test_point_mass_construction():
    report = thm3_construction(200, 1, 16)
    assert report.m == 5
    assert report.point == 16
    assert report.upper_advantage + report.lower_advantage == report.epsilon
    assert is_k_uniform(report.solution.primal, 1)
    assert all((w - report.residue) % report.m == 0 for w in report.solution.primal.support)
    assert report.advantage >= report.epsilon / 2


@pytest.mark.slow
def test_point_mass_reaches_target():
    for k in (1, 2):
        report = thm3_construction(800, k, thm4_threshold(800, k))
        assert report.reaches_target


def test_point_mass_needs_room():
    with pytest.raises(DomainError):
        thm3_construction(8, 2, 0)


def test_polynomials():
    t2 = chebyshev_t(2)
    assert t2.coeffs == (-1, 0, 2)
    assert t2(Fraction(2)) == 7
    assert chebyshev_t(0).degree == 0
    assert mpmath.almosteq(chebyshev_t(5).sup_abs_on(-1, 1), 1)
    square = UnivariatePoly((Fraction(0), Fraction(0), Fraction(1)))
    assert square.expectation(binomial_pmf(4)) == 4
    assert (square - square).degree == -1
