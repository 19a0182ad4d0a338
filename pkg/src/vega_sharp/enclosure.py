from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal

EPS = 2.0**-52
_CUSHION = 4 * EPS


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` known to contain a real quantity."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"non-finite enclosure [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"inverted enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value: float) -> Enclosure:
        return cls(value, value)

    @classmethod
    def from_mid_rad(cls, mid: float, rad: float, cushion: bool = True) -> Enclosure:
        rad = abs(rad)
        if cushion:
            rad += _CUSHION * abs(mid)
        return cls(mid - rad, mid + rad)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def rad(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: Enclosure) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: Enclosure) -> Enclosure:
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi).widened()
        return Enclosure(self.lo + other, self.hi + other).widened()

    __radd__ = __add__

    def scale(self, factor: float) -> Enclosure:
        """Multiply by a nonnegative constant."""
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return Enclosure(self.lo * factor, self.hi * factor).widened()

    def root(self, q: float) -> Enclosure:
        """Endpoint-wise ``q``-th root of a nonnegative enclosure (monotone map)."""
        lo = max(self.lo, 0.0) ** (1.0 / q)
        hi = max(self.hi, 0.0) ** (1.0 / q)
        return Enclosure(lo, hi).widened()

    def widened(self, ulps: int = 4) -> Enclosure:
        """Outward rounding cushion of a few ulps on each end."""
        c = ulps * EPS
        return Enclosure(self.lo - c * abs(self.lo), self.hi + c * abs(self.hi))

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    def __str__(self):
        return f"[{self.lo:.15g}, {self.hi:.15g}]"


def truncate(x: float, places: int = 3) -> float:
    """Truncate toward zero to ``places`` decimals (0.2571 -> 0.257)."""
    return float(Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_DOWN))
