"""Moment-matching linear programs over weight laws.

Every program has one variable per admissible weight (optionally
filtered), a normalization row and one row per matched moment
E[W^j] = E[B^j], j = 1..k. Row multipliers therefore read directly as
the power-basis coefficients of a degree-k polynomial.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, List, Optional, Tuple

import mpmath

from src.core.weights import (
    WeightPMF,
    admissible_weights,
    binomial_moments,
    binomial_pmf,
    check_weight,
    first_admissible_at_least,
    is_k_uniform,
    lower_tail_mass,
    tail_mass,
)
from src.lp.polynomial import UnivariatePoly
from src.lp.simplex import INFEASIBLE, OPTIMAL, LPProblem, LPSolution, solve_exact_lp
from src.utils.errors import DegenerateInputError, DomainError, InfeasibleError, ParityError, PreconditionError
from src.utils.logger import get_logger
from src.utils.rationals import to_mpf

logger = get_logger(__name__)

SupportFilter = Callable[[int], bool]

MAX_TAIL = "max_tail"
MAX_POINT = "max_point"
SIGNED_GAP = "signed_gap"
MAX_TWO_SIDED = "max_two_sided"
OBJECTIVES = (MAX_TAIL, MAX_POINT, SIGNED_GAP, MAX_TWO_SIDED)


def residue_filter(m: int, a: int) -> SupportFilter:
    """Keep weights congruent to a modulo m"""
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    return lambda w: (w - a) % m == 0


def slab_filter(radius) -> SupportFilter:
    """Keep weights with |w| <= radius"""
    radius = to_mpf(radius) if not isinstance(radius, (int, Fraction)) else radius
    return lambda w: abs(w) <= radius


def _moment_problem(n: int, k: int, variables: List[int], objective: List[Fraction], sense: str) -> LPProblem:
    targets = (Fraction(1),) + binomial_moments(n, k)
    rows = tuple(tuple(Fraction(w) ** j for w in variables) for j in range(k + 1))
    return LPProblem(
        variables=tuple(variables),
        rows=rows,
        rhs=targets,
        objective=tuple(objective),
        sense=sense,
        n=n,
    )


def _variables(n: int, support_filter: Optional[SupportFilter]) -> List[int]:
    weights = admissible_weights(n)
    if support_filter is not None:
        weights = [w for w in weights if support_filter(w)]
    if not weights:
        raise InfeasibleError("support filter leaves no admissible weight")
    return weights


def _check_k(n: int, k: int) -> None:
    if n < 1:
        raise DegenerateInputError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, n={n}], got {k}")


def _with_dual(solution: LPSolution) -> LPSolution:
    return LPSolution(
        status=solution.status,
        value=solution.value,
        values=solution.values,
        duals=solution.duals,
        primal=solution.primal,
        dual=UnivariatePoly(solution.duals),
        pivots=solution.pivots,
    )


def _solve_objective(n, k, t, indicator, sense, support_filter) -> LPSolution:
    variables = _variables(n, support_filter)
    objective = [Fraction(1) if indicator(w, t) else Fraction(0) for w in variables]
    problem = _moment_problem(n, k, variables, objective, sense)
    return _with_dual(solve_exact_lp(problem))


def extremal_tail(n: int, k: int, t, objective: str = MAX_TAIL,
                  support_filter: Optional[SupportFilter] = None) -> LPSolution:
    """
    Extremal probability over k-uniform weight laws

    Args:
        n: Dimension
        k: Number of matched moments
        t: Threshold (max_tail, signed_gap, max_two_sided) or point (max_point)
        objective: One of max_tail, max_point, signed_gap, max_two_sided
        support_filter: Optional predicate restricting the admissible weights

    Returns:
        LPSolution; for max_tail the dual polynomial q satisfies
        q(w) >= 1[w >= t] on every variable weight and E[q(B)] = value.
        For signed_gap the value is max |Pr[W >= t] - Pr[B >= t]|.
    """
    _check_k(n, k)
    if objective not in OBJECTIVES:
        raise DomainError(f"objective must be one of {OBJECTIVES}, got {objective!r}")

    if objective == MAX_TAIL:
        solution = _solve_objective(n, k, t, lambda w, s: w >= s, "max", support_filter)
    elif objective == MAX_TWO_SIDED:
        solution = _solve_objective(n, k, t, lambda w, s: abs(w) >= s, "max", support_filter)
    elif objective == MAX_POINT:
        solution = _solve_objective(n, k, t, lambda w, s: w == s, "max", support_filter)
    else:
        upper = _solve_objective(n, k, t, lambda w, s: w >= s, "max", support_filter)
        lower = _solve_objective(n, k, t, lambda w, s: w >= s, "min", support_filter)
        if not upper.is_optimal:
            return upper
        base = tail_mass(binomial_pmf(n), t)
        up_gap, down_gap = upper.value - base, base - lower.value
        chosen = upper if up_gap >= down_gap else lower
        solution = LPSolution(
            status=OPTIMAL,
            value=max(up_gap, down_gap),
            values=chosen.values,
            duals=chosen.duals,
            primal=chosen.primal,
            pivots=upper.pivots + lower.pivots,
        )

    if solution.status == INFEASIBLE:
        logger.warning(f"⚠️ No {k}-uniform law on the filtered support (n={n})")
    else:
        logger.debug(f"extremal_tail n={n} k={k} t={t} {objective}: {solution.value}")
    return solution


def sandwich_ok(solution: LPSolution, t, n: int, weights: Optional[List[int]] = None) -> bool:
    """Dual polynomial dominates 1[w >= t] on the LP weights and E[q(B)] = value"""
    if solution.dual is None or not solution.is_optimal:
        return False
    q = solution.dual
    if q.expectation(binomial_pmf(n)) != solution.value:
        return False
    weights = admissible_weights(n) if weights is None else weights
    return all(q(w) >= (1 if w >= t else 0) for w in weights)


def sandwich_sup_bound(dual: UnivariatePoly, n: int, k: int, value) -> Tuple[Fraction, mpmath.mpf]:
    """
    Size of a sandwiching polynomial near the bulk of B

    Returns:
        (max |q(w)| over integers |w| <= sqrt(kn), 3 delta k^1.5 2^k).
        Reported only; nothing asserts the first is below the second.
    """
    radius = isqrt(k * n)
    observed = max(abs(dual(Fraction(w))) for w in range(-radius, radius + 1))
    reference = 3 * to_mpf(value) * mpmath.mpf(k) ** 1.5 * 2 ** k
    return observed, reference


def construct_k_uniform(n: int, k: int, support_filter: Optional[SupportFilter] = None,
                        objective: Optional[Callable[[int], Fraction]] = None,
                        sense: str = "max") -> LPSolution:
    """
    A k-uniform weight law on the filtered support

    Args:
        n: Dimension
        k: Number of matched moments
        support_filter: Predicate on admissible weights
        objective: Optional per-weight objective coefficient; without one
            the first feasible vertex is returned
        sense: "max" or "min" for the objective

    Returns:
        LPSolution whose primal is a k-uniform law inside the filter, or an
        infeasible status when none exists
    """
    _check_k(n, k)
    variables = _variables(n, support_filter)
    coeffs = [Fraction(objective(w)) if objective else Fraction(0) for w in variables]
    solution = solve_exact_lp(_moment_problem(n, k, variables, coeffs, sense))
    if solution.primal is None:
        logger.warning(f"⚠️ No {k}-uniform weight law on the requested support (n={n})")
    else:
        logger.debug(f"Constructed {k}-uniform law on {len(solution.primal)} weights (n={n})")
    return solution


def next_even_moment(k: int) -> int:
    return k + 1 if (k + 1) % 2 == 0 else k + 2


def sparsify(pmf: WeightPMF, k: int) -> WeightPMF:
    """
    Caratheodory reduction of a k-uniform law to at most k+1 weights

    The vertex chosen maximizes the next even moment among laws on
    support(pmf) with the same first k moments, which pushes atoms to the
    ends of the support. A law already on <= k+1 weights is returned as is.
    """
    if not is_k_uniform(pmf, k):
        raise PreconditionError(f"input is not {k}-uniform")
    if len(pmf) <= k + 1:
        return pmf
    e = next_even_moment(k)
    variables = list(pmf.support)
    objective = [Fraction(w) ** e for w in variables]
    solution = solve_exact_lp(_moment_problem(pmf.n, k, variables, objective, "max"))
    if solution.primal is None:
        raise InfeasibleError("sparsification LP failed on a k-uniform input")
    result = solution.primal
    logger.debug(f"Sparsified {len(pmf)} -> {len(result)} weights (k={k})")
    return result


def fact2_bound(n: int, k: int, t) -> mpmath.mpf:
    """sqrt(2) (2kn / (e t^2))^k, bounding Pr[|W| >= t] for 2k-uniform W"""
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    return mpmath.sqrt(2) * (2 * k * n / (mpmath.e * to_mpf(t) ** 2)) ** k


def residue_class_for(n: int, t: int, m: int) -> Tuple[int, int]:
    """
    Residue a and target point s of parity n used by the point-mass construction

    s = t when t has the parity of n; otherwise t + m (m odd). Returns (a, s)
    with a = s mod m.
    """
    s = t
    if (s - n) % 2:
        if m % 2 == 0:
            raise ParityError(f"no point of parity n={n} congruent to {t} mod even {m}")
        s = t + m
    check_weight(n, s)
    return s % m, s


@dataclass(frozen=True)
class PointMassReport:
    """Outcome of the residue-class point-mass construction"""
    n: int
    k: int
    m: int
    residue: int
    point: int
    solution: LPSolution
    binomial_point: Fraction
    epsilon: Fraction
    upper_advantage: Fraction
    lower_advantage: Fraction

    @property
    def point_mass(self) -> Fraction:
        return self.solution.value

    @property
    def target(self) -> Fraction:
        """(m/4) Pr[B = s]"""
        return Fraction(self.m, 4) * self.binomial_point

    @property
    def reaches_target(self) -> bool:
        return self.point_mass >= self.target

    @property
    def best_side(self) -> str:
        return "upper" if self.upper_advantage >= self.lower_advantage else "lower"

    @property
    def advantage(self) -> Fraction:
        return max(self.upper_advantage, self.lower_advantage)


def thm3_construction(n: int, k: int, t: int) -> PointMassReport:
    """
    k-uniform law supported on one residue class mod m = floor(sqrt(n/(8k)))
    maximizing the mass at t, plus the one-sided advantages it yields.

    The two one-sided advantages sum exactly to epsilon = Pr[D = t] - Pr[B = t];
    the lower one is the upper advantage of the complement at -t.
    """
    _check_k(n, k)
    if k < 1:
        raise DomainError("k must be >= 1")
    m = isqrt(n // (8 * k))
    if m < 1:
        raise DomainError(f"n={n} is too small for k={k}: m = floor(sqrt(n/8k)) = 0")
    a, s = residue_class_for(n, t, m)
    solution = extremal_tail(n, k, s, MAX_POINT, residue_filter(m, a))
    if not solution.is_optimal or solution.primal is None:
        raise InfeasibleError(f"no {k}-uniform law on the residue class {a} mod {m}")

    pmf, b = solution.primal, binomial_pmf(n)
    upper = tail_mass(pmf, s) - tail_mass(b, s)
    lower = lower_tail_mass(pmf, s) - lower_tail_mass(b, s)
    report = PointMassReport(
        n=n, k=k, m=m, residue=a, point=s, solution=solution,
        binomial_point=b[s],
        epsilon=pmf[s] - b[s],
        upper_advantage=upper,
        lower_advantage=lower,
    )
    logger.info(f"✅ Point-mass construction n={n} k={k} m={m}: mass {float(report.point_mass):.6f}")
    return report


def thm4_lower_bound(n: int, k: int, t) -> mpmath.mpf:
    """(1 / (3 k^1.5)) (k n / (16 t^2))^(k/2)"""
    k_ = mpmath.mpf(k)
    return (1 / (3 * k_ ** 1.5)) * (k_ * n / (16 * to_mpf(t) ** 2)) ** (k_ / 2)


def thm4_threshold(n: int, k: int) -> int:
    """First admissible weight >= sqrt(n k)"""
    return first_admissible_at_least(n, mpmath.sqrt(n * k))
