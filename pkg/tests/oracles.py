"""Brute-force references used only by the tests.

Everything here enumerates strings in {-1, 1}^n directly, so it is only
usable for n <= 12.
"""
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod
from typing import Dict, List, Sequence, Tuple

from src.core.weights import WeightPMF

String = Tuple[int, ...]


def all_strings(n: int) -> List[String]:
    return list(product((-1, 1), repeat=n))


def string_law(pmf: WeightPMF) -> Dict[String, Fraction]:
    """Exchangeable law on strings: each weight's mass spread uniformly over its slice"""
    n = pmf.n
    law = {}
    for x in all_strings(n):
        w = sum(x)
        p = pmf[w]
        if p:
            law[x] = p / comb(n, (n + w) // 2)
    return law


def weight_law(law: Dict[String, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for x, p in law.items():
        out[sum(x)] = out.get(sum(x), Fraction(0)) + p
    return {w: p for w, p in out.items() if p}


def moments(law: Dict[String, Fraction], k: int) -> Tuple[Fraction, ...]:
    return tuple(sum(p * sum(x) ** j for x, p in law.items()) for j in range(1, k + 1))


def tail(law: Dict[String, Fraction], t) -> Fraction:
    return sum((p for x, p in law.items() if sum(x) >= t), Fraction(0))


def parity_bias(law: Dict[String, Fraction], subset: Sequence[int]) -> Fraction:
    return sum((p * prod(x[i] for i in subset) for x, p in law.items()), Fraction(0))


def is_k_wise_uniform(law: Dict[String, Fraction], k: int) -> bool:
    """Every nonempty parity of size <= k has mean zero"""
    n = len(next(iter(law)))
    return all(parity_bias(law, s) == 0 for size in range(1, k + 1) for s in combinations(range(n), size))


def smooth(law: Dict[String, Fraction], rho: Fraction) -> Dict[String, Fraction]:
    """x * z with z_i = 1 w.p. (1 + rho) / 2, independently"""
    n = len(next(iter(law)))
    keep, flip = (1 + rho) / 2, (1 - rho) / 2
    out: Dict[String, Fraction] = {}
    for z in all_strings(n):
        pz = prod((keep if zi == 1 else flip) for zi in z)
        if not pz:
            continue
        for x, p in law.items():
            y = tuple(a * b for a, b in zip(x, z))
            out[y] = out.get(y, Fraction(0)) + p * pz
    return out


def replace_once(law: Dict[String, Fraction]) -> Dict[String, Fraction]:
    """Pick a uniform coordinate and set it to a uniform sign"""
    n = len(next(iter(law)))
    out: Dict[String, Fraction] = {}
    share = Fraction(1, 2 * n)
    for x, p in law.items():
        for i in range(n):
            for sign in (-1, 1):
                y = x[:i] + (sign,) + x[i + 1:]
                out[y] = out.get(y, Fraction(0)) + p * share
    return out
