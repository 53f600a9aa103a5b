"""Exact rational helpers.

Every threshold in the solver is a rational number. Logarithms only ever
appear inside comparisons, which are decided with integer powers instead
of floating point.
"""
import math
from fractions import Fraction
from typing import Union

from ..core.errors import InvalidArgumentError

Rational = Union[int, Fraction]


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def is_dyadic(value: Rational) -> bool:
    return is_power_of_two(Fraction(value).denominator)


def parse_dyadic(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``num/den`` (or an integer) and require a power-of-two denominator."""
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, int):
        value = Fraction(text)
    else:
        raw = str(text).strip()
        try:
            if "/" in raw:
                num, den = raw.split("/", 1)
                if int(den) == 0:
                    raise InvalidArgumentError(f"zero denominator in {raw!r}")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(raw))
        except ValueError as e:
            raise InvalidArgumentError(f"not a rational of the form num/den: {raw!r}") from e
    if not is_dyadic(value):
        raise InvalidArgumentError(f"{value} is not dyadic (denominator must be a power of two)")
    return value


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def ceil_fraction(value: Rational) -> int:
    value = Fraction(value)
    return -((-value.numerator) // value.denominator)


def ceil_log2(value: int) -> int:
    """Smallest i with 2**i >= value, for value >= 1."""
    if value < 1:
        raise InvalidArgumentError(f"ceil_log2 needs a positive integer, got {value}")
    return (value - 1).bit_length()


def ceil_mul_log2(coeff: Rational, value: int) -> int:
    """Smallest integer L with L >= coeff * log2(value)."""
    coeff = Fraction(coeff)
    if value < 1 or coeff < 0:
        raise InvalidArgumentError("ceil_mul_log2 needs coeff >= 0 and value >= 1")
    if value == 1 or coeff == 0:
        return 0
    # L >= (a/b) log2 v  <=>  2**(L*b) >= v**a
    a, b = coeff.numerator, coeff.denominator
    target = value ** a
    low = ceil_fraction(coeff * (value.bit_length() - 1))
    result = max(low, 0)
    while 2 ** (result * b) < target:
        result += 1
    return result


def le_log2(value: Rational, argument: int) -> bool:
    """Exact test of value <= log2(argument)."""
    value = Fraction(value)
    if argument < 1:
        raise InvalidArgumentError("log2 of a non-positive integer")
    if value <= 0:
        return True
    if value >= argument.bit_length():
        return False
    # 2**(p/q) <= argument  <=>  2**p <= argument**q
    return 2 ** value.numerator <= argument ** value.denominator


def ceil_log_base(value: int, base: Fraction) -> int:
    """Smallest d >= 0 with base**d >= value, for base > 1."""
    base = Fraction(base)
    if base <= 1:
        raise InvalidArgumentError("logarithm base must exceed 1")
    depth = 0
    power = Fraction(1)
    while power < value:
        power *= base
        depth += 1
    return depth


def common_denominator(*values: Rational) -> int:
    """Least common multiple of the denominators."""
    result = 1
    for value in values:
        den = Fraction(value).denominator
        result = result * den // math.gcd(result, den)
    return result
