"""Binary64 interval arithmetic with directed outward rounding.

Every operation returns an interval guaranteed to contain the exact real
result for all points of its inputs.  Correct rounding is approximated by
computing each endpoint in native double precision and then widening
outward by one representable step (two steps for transcendental kernels,
which absorbs libm's documented 1-2 ulp error).  Widening never exceeds
4 ulp per elementary operation.
"""

from __future__ import annotations

import math


def next_down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def next_up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _down2(x: float) -> float:
    return math.nextafter(math.nextafter(x, -math.inf), -math.inf)


def _up2(x: float) -> float:
    return math.nextafter(math.nextafter(x, math.inf), math.inf)


def atanh_point(x: float) -> float:
    """arctanh via the fused log-of-ratio form, accurate near 0.

    0.5*(log1p(x) - log1p(-x)) evaluates 0.5*ln((1+x)/(1-x)) without the
    cancellation that 1+x suffers for tiny x.
    """
    return 0.5 * (math.log1p(x) - math.log1p(-x))


class Interval:
    """Closed interval [lo, hi] of finite binary64 floats."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        lo = float(lo)
        hi = float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @property
    def mid(self) -> float:
        return self.lo + 0.5 * (self.hi - self.lo)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    def __reduce__(self):
        # __slots__ plus the immutability guard break default pickling.
        return (Interval, (self.lo, self.hi))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(next_down(self.lo + other.lo), next_up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(next_down(self.lo - other.hi), next_up(self.hi - other.lo))

    def __rsub__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "Interval":
        # Negation is exact in binary64: no widening.
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p0 = self.lo * other.lo
        p1 = self.lo * other.hi
        p2 = self.hi * other.lo
        p3 = self.hi * other.hi
        return Interval(next_down(min(p0, p1, p2, p3)), next_up(max(p0, p1, p2, p3)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.lo <= 0.0 <= other.hi:
            raise ZeroDivisionError(f"denominator {other!r} straddles zero")
        q0 = self.lo / other.lo
        q1 = self.lo / other.hi
        q2 = self.hi / other.lo
        q3 = self.hi / other.hi
        return Interval(next_down(min(q0, q1, q2, q3)), next_up(max(q0, q1, q2, q3)))

    def __rtruediv__(self, other) -> "Interval":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self


def _coerce(x) -> "Interval":
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float)):
        return Interval(x, x)
    return NotImplemented


def make(lo: float, hi: float) -> Interval:
    """Validating constructor: finite endpoints with lo <= hi."""
    return Interval(lo, hi)


def add(x: Interval, y: Interval) -> Interval:
    return x + y


def sub(x: Interval, y: Interval) -> Interval:
    return x - y


def mul(x: Interval, y: Interval) -> Interval:
    return x * y


def neg(x: Interval) -> Interval:
    return -x


def div(x: Interval, y: Interval) -> Interval:
    return x / y


def square(x: Interval) -> Interval:
    """Tight square: unlike x*x, exploits that x is the same variable,
    so the result never dips below 0 when x straddles zero."""
    a, b = abs(x.lo), abs(x.hi)
    if a > b:
        a, b = b, a
    lo = 0.0 if x.lo <= 0.0 <= x.hi else next_down(a * a)
    return Interval(max(lo, 0.0), next_up(b * b))


def ln_iv(x: Interval) -> Interval:
    """Natural log enclosure; requires x.lo > 0."""
    if x.lo <= 0.0:
        raise ValueError(f"ln needs a strictly positive interval, got {x!r}")
    return Interval(_down2(math.log(x.lo)), _up2(math.log(x.hi)))


def atanh_iv(x: Interval) -> Interval:
    """arctanh enclosure; requires [lo, hi] inside (-1, 1)."""
    if not (-1.0 < x.lo and x.hi < 1.0):
        raise ValueError(f"atanh needs an interval inside (-1, 1), got {x!r}")
    return Interval(_down2(atanh_point(x.lo)), _up2(atanh_point(x.hi)))


def split(x: Interval) -> tuple[Interval, Interval]:
    """Bisect at the midpoint.  Fails when no float strictly separates."""
    m = x.mid
    if not (x.lo < m < x.hi):
        raise ValueError(f"interval {x!r} is too thin to split")
    return Interval(x.lo, m), Interval(m, x.hi)
