"""Exact-rational helpers shared by every package.

Rationals are ``fractions.Fraction``; anything that must leave the
rationals (square roots, exponentials) is evaluated with mpmath at the
configured working precision.
"""
from fractions import Fraction
from typing import Union

import mpmath

from src.config import get_settings
from src.utils.errors import DomainError

Number = Union[int, Fraction]

mpmath.mp.dps = get_settings().mp_dps


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or string like '3/4' / '0.25' into a Fraction.

    Floats are rejected: silent binary rounding would break exactness.
    """
    if isinstance(value, bool):
        raise DomainError(f"Not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"Not a rational number: {value!r}") from e
    raise DomainError(f"Not a rational number: {value!r}")


def to_mpf(value) -> mpmath.mpf:
    """Lift an exact or floating value to an mpmath float"""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def check_rho(rho: Fraction) -> Fraction:
    """Validate a correlation parameter in [0, 1]"""
    rho = to_fraction(rho)
    if rho < 0 or rho > 1:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    return rho


def at_most(value, bound, slack: float = None) -> bool:
    """value <= bound, exactly when both are rational, else with slack"""
    if is_rational(value) and is_rational(bound):
        return value <= bound
    if slack is None:
        slack = get_settings().bound_slack
    return to_mpf(value) <= to_mpf(bound) + slack


def exact_power(base: Fraction, exponent: Fraction):
    """base**exponent, kept rational when the exponent is an integer"""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return Fraction(base) ** int(exponent)
    return to_mpf(base) ** to_mpf(exponent)


def format_rational(value) -> str:
    """Render as 'num/den'; integers keep an explicit denominator"""
    value = to_fraction(value)
    return f"{value.numerator}/{value.denominator}"
