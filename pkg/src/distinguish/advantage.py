from fractions import Fraction
from typing import List, Optional, Tuple

import pandas as pd

from src.core.weights import WeightPMF, admissible_weights, lower_tail_mass, point_mass, tail_mass
from src.utils.errors import DimensionMismatchError
from src.utils.logger import get_logger
from src.utils.rationals import format_rational

logger = get_logger(__name__)


def _same_n(p: WeightPMF, q: WeightPMF) -> int:
    if p.n != q.n:
        raise DimensionMismatchError(f"weight laws live on different n ({p.n} vs {q.n})")
    return p.n


def advantage(p: WeightPMF, q: WeightPMF, t) -> Fraction:
    """Pr_p[W >= t] - Pr_q[W >= t]"""
    _same_n(p, q)
    return tail_mass(p, t) - tail_mass(q, t)


def lower_advantage(p: WeightPMF, q: WeightPMF, t) -> Fraction:
    """Pr_p[W <= t] - Pr_q[W <= t]"""
    _same_n(p, q)
    return lower_tail_mass(p, t) - lower_tail_mass(q, t)


def dichotomy_gap(p: WeightPMF, q: WeightPMF, t: int) -> Fraction:
    """Both one-sided advantages at t add up to Pr_p[W = t] - Pr_q[W = t]"""
    return advantage(p, q, t) + lower_advantage(p, q, t) - (point_mass(p, t) - point_mass(q, t))


def _thresholds(n: int) -> List[int]:
    return admissible_weights(n) + [n + 2]


def best_threshold(p: WeightPMF, q: WeightPMF) -> Tuple[int, Fraction]:
    """Threshold maximizing the signed advantage; smallest t wins ties"""
    n = _same_n(p, q)
    best_t, best = None, None
    for t in _thresholds(n):
        value = advantage(p, q, t)
        if best is None or value > best:
            best_t, best = t, value
    return best_t, best


def best_abs_threshold(p: WeightPMF, q: WeightPMF) -> Tuple[int, Fraction]:
    """Threshold maximizing |advantage|"""
    n = _same_n(p, q)
    best_t, best = None, None
    for t in _thresholds(n):
        value = abs(advantage(p, q, t))
        if best is None or value > best:
            best_t, best = t, value
    return best_t, best


def best_interval(p: WeightPMF, q: WeightPMF, absolute: bool = False) -> Tuple[Tuple[int, int], Fraction]:
    """
    Interval [a, b] of admissible weights maximizing
    Pr_p[a <= W <= b] - Pr_q[a <= W <= b] (or its absolute value)

    Returns:
        ((a, b), value); lexicographically smallest (a, b) on ties
    """
    n = _same_n(p, q)
    weights = admissible_weights(n)
    pm, qm = p.masses, q.masses
    diffs = [pm.get(w, Fraction(0)) - qm.get(w, Fraction(0)) for w in weights]
    prefix = [Fraction(0)]
    for d in diffs:
        prefix.append(prefix[-1] + d)

    best_ab, best = None, None
    for i in range(len(weights)):
        for j in range(i, len(weights)):
            value = prefix[j + 1] - prefix[i]
            if absolute:
                value = abs(value)
            if best is None or value > best:
                best_ab, best = (weights[i], weights[j]), value
    return best_ab, best


def threshold_sweep(p: WeightPMF, q: WeightPMF, thresholds: Optional[List[int]] = None) -> pd.DataFrame:
    """One row per threshold: both tails, the advantage and its float value"""
    n = _same_n(p, q)
    thresholds = thresholds if thresholds is not None else _thresholds(n)
    rows = []
    for t in thresholds:
        tp, tq = tail_mass(p, t), tail_mass(q, t)
        rows.append({
            "t": t,
            "tail_p": format_rational(tp),
            "tail_q": format_rational(tq),
            "advantage": format_rational(tp - tq),
            "advantage_float": float(tp - tq),
        })
    logger.debug(f"Swept {len(rows)} thresholds (n={n})")
    return pd.DataFrame(rows, columns=["t", "tail_p", "tail_q", "advantage", "advantage_float"])
