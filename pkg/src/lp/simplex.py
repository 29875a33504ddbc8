"""Exact two-phase simplex over the rationals with Bland's rule.

Problems are in equality form: optimize c.x subject to A x = b, x >= 0.
The tableau keeps the phase-one artificial columns through phase two
(they may never re-enter), so at termination they hold B^-1 and the
row duals fall out as c_B B^-1.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.config import get_settings
from src.core.weights import WeightPMF
from src.lp.polynomial import UnivariatePoly
from src.utils.errors import DegenerateInputError, DimensionMismatchError, DomainError, SolverError
from src.utils.logger import get_logger

logger = get_logger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    """
    Equality-form linear program over variables indexed by weights

    Args:
        variables: Labels of the columns (admissible weights for moment problems)
        rows: Constraint matrix, one tuple per row
        rhs: Right-hand side
        objective: Objective coefficients, one per variable
        sense: "max" or "min"
        n: Dimension when the variables are weights of an n-bit weight law
    """
    variables: Tuple[int, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]
    rhs: Tuple[Fraction, ...]
    objective: Tuple[Fraction, ...]
    sense: str = "max"
    n: Optional[int] = None

    def __post_init__(self):
        if not self.variables:
            raise DegenerateInputError("LP has no variables")
        if self.sense not in ("max", "min"):
            raise DomainError(f"sense must be 'max' or 'min', got {self.sense!r}")
        width = len(self.variables)
        if len(self.objective) != width or any(len(r) != width for r in self.rows):
            raise DimensionMismatchError("every row and the objective need one entry per variable")
        if len(self.rows) != len(self.rhs):
            raise DimensionMismatchError("one right-hand side per row is required")


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Optional[Fraction] = None
    values: Tuple[Fraction, ...] = ()
    duals: Tuple[Fraction, ...] = ()
    primal: Optional[WeightPMF] = None
    dual: Optional[UnivariatePoly] = None
    pivots: int = 0
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class ExactSimplex:
    """Dense Fraction tableau; deterministic for a given problem"""

    def __init__(self, problem: LPProblem, max_pivots: Optional[int] = None):
        self.problem = problem
        self.max_pivots = max_pivots or get_settings().max_pivots
        self.pivots = 0

        self.nv = len(problem.variables)
        self.m = len(problem.rows)
        self.signs: List[int] = []
        self.table: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        for i, (row, b) in enumerate(zip(problem.rows, problem.rhs)):
            s = -1 if b < 0 else 1
            self.signs.append(s)
            artificial = [Fraction(1) if r == i else Fraction(0) for r in range(self.m)]
            self.table.append([Fraction(s * a) for a in row] + artificial)
            self.rhs.append(Fraction(s * b))
        self.basis = [self.nv + i for i in range(self.m)]

    def _reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        cb = [cost[j] for j in self.basis]
        width = self.nv + self.m
        out = list(cost)
        for r in range(self.m):
            if cb[r] == 0:
                continue
            row = self.table[r]
            for j in range(width):
                if row[j]:
                    out[j] -= cb[r] * row[j]
        return out

    def _pivot(self, r: int, j: int) -> None:
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverError(f"pivot guard reached ({self.max_pivots})")
        prow = self.table[r]
        inv = 1 / prow[j]
        self.table[r] = prow = [a * inv for a in prow]
        self.rhs[r] *= inv
        for i in range(self.m):
            if i == r:
                continue
            factor = self.table[i][j]
            if factor:
                row = self.table[i]
                self.table[i] = [a - factor * b if b else a for a, b in zip(row, prow)]
                self.rhs[i] -= factor * self.rhs[r]
        self.basis[r] = j

    def _optimize(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Minimize cost over the current basis; columns >= allowed never enter"""
        while True:
            reduced = self._reduced_costs(cost)
            in_basis = set(self.basis)
            entering = next((j for j in range(allowed) if j not in in_basis and reduced[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for r in range(self.m):
                a = self.table[r][entering]
                if a > 0:
                    key = (self.rhs[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return UNBOUNDED
            self._pivot(best[1], entering)

    def solve(self) -> LPSolution:
        # Phase one: drive the artificials to zero
        phase_one = [Fraction(0)] * self.nv + [Fraction(1)] * self.m
        self._optimize(phase_one, self.nv)
        residual = sum((self.rhs[r] for r in range(self.m) if self.basis[r] >= self.nv), Fraction(0))
        if residual > 0:
            logger.debug(f"Phase one ended with residual {residual}")
            return LPSolution(status=INFEASIBLE, pivots=self.pivots)

        for r in range(self.m):
            if self.basis[r] < self.nv:
                continue
            in_basis = set(self.basis)
            j = next((j for j in range(self.nv) if j not in in_basis and self.table[r][j] != 0), None)
            if j is not None:
                self._pivot(r, j)
            # otherwise the row is redundant and its artificial stays basic at zero

        # Phase two
        flip = -1 if self.problem.sense == "max" else 1
        cost = [flip * Fraction(c) for c in self.problem.objective] + [Fraction(0)] * self.m
        status = self._optimize(cost, self.nv)
        if status == UNBOUNDED:
            return LPSolution(status=UNBOUNDED, pivots=self.pivots)

        values = [Fraction(0)] * self.nv
        for r, j in enumerate(self.basis):
            if j < self.nv:
                values[j] = self.rhs[r]
        value = sum((c * x for c, x in zip(self.problem.objective, values)), Fraction(0))

        duals = []
        for i in range(self.m):
            y = sum((cost[self.basis[r]] * self.table[r][self.nv + i] for r in range(self.m)), Fraction(0))
            duals.append(flip * y * self.signs[i])

        logger.debug(f"Simplex optimal after {self.pivots} pivots, value {value}")
        return LPSolution(
            status=OPTIMAL,
            value=value,
            values=tuple(values),
            duals=tuple(duals),
            pivots=self.pivots,
        )


def solve_exact_lp(problem: LPProblem, max_pivots: Optional[int] = None) -> LPSolution:
    """Solve exactly; attaches the primal weight law when the variables are weights"""
    solution = ExactSimplex(problem, max_pivots).solve()
    if solution.is_optimal and problem.n is not None and sum(solution.values) == 1:
        primal = WeightPMF.from_masses(problem.n, dict(zip(problem.variables, solution.values)))
        solution = LPSolution(
            status=solution.status,
            value=solution.value,
            values=solution.values,
            duals=solution.duals,
            primal=primal,
            pivots=solution.pivots,
        )
    return solution