"""Exact certificates around M_k(q^(x^2)) and q-Vandermonde matrices."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from src.gaussmix.hankel import _sympy_to_fraction, gaussian_kernel, mk_matrix
from src.lp.polynomial import UnivariatePoly
from src.utils.errors import DomainError
from src.utils.logger import get_logger

logger = get_logger(__name__)

Q = sympy.Symbol("q")


def q_product(k: int, q) -> Fraction:
    """prod_{i=1..k} (1 - q^(-2i))"""
    q = Fraction(q)
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= 1 - q ** (-2 * i)
    return out


@dataclass(frozen=True)
class InverseBoundReport:
    k: int
    q: Fraction
    passed: bool
    max_entry: Fraction
    max_ratio: Fraction
    failures: Tuple[Tuple[int, int], ...] = ()


def inverse_entry_bound_check(k: int, q) -> InverseBoundReport:
    """|A_ij| <= C(k, i-1) C(k, j-1) / prod (1 - q^(-2i)) for A = M_k(q^(x^2))^-1"""
    q = Fraction(q)
    if q <= 1:
        raise DomainError(f"q must exceed 1, got {q}")
    inverse = mk_matrix(gaussian_kernel(q), k).to_sympy().inv()
    scale = q_product(k, q)
    max_entry, max_ratio, failures = Fraction(0), Fraction(0), []
    for i in range(k + 1):
        for j in range(k + 1):
            entry = abs(_sympy_to_fraction(inverse[i, j]))
            bound = Fraction(comb(k, i) * comb(k, j)) / scale
            max_entry = max(max_entry, entry)
            max_ratio = max(max_ratio, entry / bound)
            if entry > bound:
                failures.append((i + 1, j + 1))
    report = InverseBoundReport(k, q, not failures, max_entry, max_ratio, tuple(failures))
    logger.debug(f"Inverse bound k={k} q={q}: max ratio {float(max_ratio):.4f}")
    return report


def qbinomial(k: int, i: int) -> UnivariatePoly:
    """Gaussian binomial [k choose i]_q from prod_{j<k} (1 + q^j t) = sum_i q^(i(i-1)/2) [k i]_q t^i"""
    if not 0 <= i <= k:
        raise DomainError(f"need 0 <= i <= k, got k={k}, i={i}")
    # rows[i] holds the q-polynomial multiplying t^i
    rows: List[UnivariatePoly] = [UnivariatePoly.constant(Fraction(1))]
    for j in range(k):
        shifted = UnivariatePoly.monomial(j)
        nxt = rows + [UnivariatePoly(())]
        for r in range(1, len(nxt)):
            nxt[r] = nxt[r] + shifted * rows[r - 1]
        rows = nxt
    coeffs = rows[i].coeffs
    drop = i * (i - 1) // 2
    if any(c != 0 for c in coeffs[:drop]):
        raise ArithmeticError("generating function coefficient is not divisible by q^(i(i-1)/2)")
    return UnivariatePoly(coeffs[drop:])


def _laurent(expr) -> Dict[int, int]:
    """Exponent -> coefficient of a Laurent polynomial in q"""
    numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(expr)))
    den = sympy.Poly(denominator, Q)
    if len(den.terms()) != 1:
        raise ArithmeticError(f"not a Laurent polynomial: denominator {denominator}")
    (shift,), scale = den.terms()[0]
    out: Dict[int, int] = {}
    for (power,), coeff in sympy.Poly(numerator, Q).terms():
        value = sympy.Rational(coeff) / scale
        out[power - shift] = value
    return out


def vandermonde_entry(k: int, i: int, j: int) -> Dict[int, object]:
    """(-1)^(i+j) (V^-1)_{i,j} prod_{b=1..k} (q^b - 1) for V_{r,c} = q^(r c), as a Laurent polynomial"""
    x = sympy.Symbol("x")
    c = i - 1
    nodes = [Q ** m for m in range(k + 1)]
    others = [nodes[m] for m in range(k + 1) if m != c]
    numerator = sympy.Poly(sympy.prod([x - node for node in others]), x).all_coeffs()[::-1]
    denominator = sympy.prod([nodes[c] - node for node in others])
    entry = numerator[j - 1] / denominator
    scaled = (-1) ** (i + j) * entry * sympy.prod([Q ** b - 1 for b in range(1, k + 1)])
    return _laurent(scaled)


@dataclass(frozen=True)
class PowerCountReport:
    k: int
    passed: bool
    all_unit: bool
    entries: Dict[Tuple[int, int], Dict[int, object]] = field(repr=False)
    failures: Tuple[Tuple[int, int], ...] = ()


def vandermonde_power_count_check(k: int) -> PowerCountReport:
    """
    Every scaled inverse entry is a sum of C(k, i-1) C(k, j-1) powers of q

    Powers are counted with multiplicity: coefficients must be nonnegative
    integers adding up to the binomial product. all_unit records whether
    every coefficient is exactly 1.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    entries, failures, all_unit = {}, [], True
    for i in range(1, k + 2):
        for j in range(1, k + 2):
            laurent = vandermonde_entry(k, i, j)
            entries[(i, j)] = laurent
            coefficients = [c for c in laurent.values() if c != 0]
            integral = all(sympy.Rational(c).q == 1 and c > 0 for c in coefficients)
            if not integral or sum(coefficients) != comb(k, i - 1) * comb(k, j - 1):
                failures.append((i, j))
            if any(c != 1 for c in coefficients):
                all_unit = False
    if failures:
        logger.warning(f"⚠️ Power count fails for k={k} at {failures}")
    return PowerCountReport(k, not failures, all_unit, entries, tuple(failures))


def numeric_vandermonde_inverse(k: int, q) -> sympy.Matrix:
    """Exact inverse of V_{r,c} = q^(r c) at a rational q"""
    q = sympy.Rational(str(Fraction(q)))
    return sympy.Matrix(k + 1, k + 1, lambda r, c: q ** (r * c)).inv()


def elementary_symmetric(values: Sequence[Fraction], degree: int) -> Fraction:
    """e_degree(values)"""
    coeffs = [Fraction(1)]
    for v in values:
        nxt = coeffs + [Fraction(0)]
        for d in range(len(coeffs), 0, -1):
            nxt[d] += v * coeffs[d - 1]
        coeffs = nxt
    return coeffs[degree] if degree < len(coeffs) else Fraction(0)


@dataclass(frozen=True)
class QuotientReport:
    nodes: Tuple[Fraction, ...]
    passed: bool
    checked: int
    failures: Tuple[Tuple[int, int], ...] = ()


def elementary_symmetric_quotient_check(nodes: Sequence, pairs: Optional[Sequence[Tuple[int, int]]] = None) -> QuotientReport:
    """
    det(V without row j and column i) / det(V without row k+1 and column i)
    equals e_{k+1-j}(nodes without x_{i-1}), for V_{r,c} = x_c^r (1-based j, i)
    """
    nodes = tuple(Fraction(v) for v in nodes)
    if len(set(nodes)) != len(nodes):
        raise DomainError("nodes must be distinct")
    k = len(nodes) - 1
    V = sympy.Matrix(k + 1, k + 1, lambda r, c: sympy.Rational(str(nodes[c] ** r)))
    if pairs is None:
        pairs = [(j, i) for j in range(1, k + 2) for i in range(1, k + 2)]
    failures = []
    for j, i in pairs:
        if not (1 <= i <= k + 1 and 1 <= j <= k + 1):
            raise DomainError(f"indices out of range: j={j}, i={i}")
        num = _sympy_to_fraction(V.minor_submatrix(j - 1, i - 1).det(method="bareiss")) if k else Fraction(1)
        den = _sympy_to_fraction(V.minor_submatrix(k, i - 1).det(method="bareiss")) if k else Fraction(1)
        rest = [v for idx, v in enumerate(nodes) if idx != i - 1]
        if num / den != elementary_symmetric(rest, k + 1 - j):
            failures.append((j, i))
    return QuotientReport(nodes, not failures, len(pairs), tuple(failures))
