"""Exact rational helpers built on :class:`fractions.Fraction`."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

GAP_GUARD = 1e-9


def parse_rational(value) -> Fraction:
    """Parse ``"3/4"``, ``"0.15"``, ints or Fractions exactly.

    Floats go through their shortest repr so ``0.1`` means one tenth.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not finite: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


def format_rational(value) -> str:
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def snap(x: float) -> Fraction:
    """Exact rational equal to the binary float ``x``."""
    if not math.isfinite(x):
        raise ValueError(f"cannot snap non-finite value {x!r}")
    return Fraction(x)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def integerize(values: Sequence[Fraction]) -> list[int]:
    """Scale by the lcm of denominators, then divide out the common gcd."""
    scale = lcm_of_denominators(values)
    ints = [int(Fraction(v) * scale) for v in values]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def sqrt_upper(n: int, denominator: int = 10**12) -> Fraction:
    """Smallest multiple of ``1/denominator`` that is >= sqrt(n)."""
    if n < 0:
        raise ValueError("negative radicand")
    scaled = n * denominator * denominator
    r = math.isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, denominator)
