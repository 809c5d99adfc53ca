"""Closed real intervals and the nonnegative interval arithmetic applied to alpha-cuts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ComputationError, InputError


@dataclass(frozen=True)
class Interval:
    """A closed interval ``[lo, hi]`` with finite endpoints.

    Zero-width intervals are ordinary values.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InputError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise InputError(f"interval has lo > hi: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, other) -> bool:
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def mirror(self) -> Interval:
        """Reflect about zero; ``+ 0.0`` keeps ``-0.0`` out of the endpoints."""
        return Interval(-self.hi + 0.0, -self.lo + 0.0)


def _check_nonnegative(iv: Interval, what: str) -> None:
    if iv.lo < 0:
        raise InputError(f"{what} must be nonnegative, got [{iv.lo}, {iv.hi}]")


def iv_mul(a: Interval, b: Interval) -> Interval:
    """Product of two nonnegative intervals."""
    _check_nonnegative(a, "left factor")
    _check_nonnegative(b, "right factor")
    return Interval(a.lo * b.lo, a.hi * b.hi)


def iv_div(num: Interval, den: Interval) -> Interval:
    """Quotient of a nonnegative interval by a strictly positive one."""
    _check_nonnegative(num, "numerator")
    if den.lo <= 0:
        raise ComputationError(
            f"division by an interval not bounded away from zero: [{den.lo}, {den.hi}]"
        )
    return Interval(num.lo / den.hi, num.hi / den.lo)


@dataclass(frozen=True)
class IntervalSet:
    """Expert interval estimates for one quantity plus its natural domain bounds.

    ``None`` for a bound means the domain is unbounded on that side.
    """

    intervals: tuple
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None

    def __post_init__(self):
        ivs = tuple(iv if isinstance(iv, Interval) else Interval(*iv) for iv in self.intervals)
        if not ivs:
            raise InputError("an interval set needs at least one interval")
        lb = None if self.lower_bound is None else float(self.lower_bound)
        ub = None if self.upper_bound is None else float(self.upper_bound)
        for bound in (lb, ub):
            if bound is not None and not math.isfinite(bound):
                raise InputError("use None for an unbounded side, not an infinite value")
        if lb is not None and ub is not None and lb > ub:
            raise InputError(f"lower bound {lb} exceeds upper bound {ub}")
        for k, iv in enumerate(ivs):
            if lb is not None and iv.lo < lb:
                raise InputError(f"interval {k} [{iv.lo}, {iv.hi}] lies below the lower bound {lb}")
            if ub is not None and iv.hi > ub:
                raise InputError(f"interval {k} [{iv.lo}, {iv.hi}] exceeds the upper bound {ub}")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "lower_bound", lb)
        object.__setattr__(self, "upper_bound", ub)

    @classmethod
    def from_pairs(cls, pairs: Iterable, bounds=(None, None)) -> IntervalSet:
        lb, ub = bounds
        return cls(tuple(Interval(lo, hi) for lo, hi in pairs), lb, ub)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def lefts(self) -> list:
        return [iv.lo for iv in self.intervals]

    @property
    def rights(self) -> list:
        return [iv.hi for iv in self.intervals]

    def mirror(self) -> IntervalSet:
        """Reflect every interval and swap the bounds."""
        flip = lambda v: None if v is None else -v + 0.0
        return IntervalSet(
            tuple(iv.mirror() for iv in self.intervals),
            flip(self.upper_bound),
            flip(self.lower_bound),
        )
