"""Encode a set of expert interval estimates as an interval type-2 membership function.

Pipeline: find the overlap (or endpoint mean when there is none), pick an
FOU category from how many intervals touch the natural bounds, strip the
overlap to get reduced interval sets, then aggregate the reduced endpoints
with weighted power means into trapezoidal upper/lower membership
functions. Bounded sides that only some intervals reach get a "droop"
tail that meets the bound at an intermediate height.

Signed inputs are handled by mirroring the nonpositive part onto the
positive half-axis and composing the two halves afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from statistics import fmean
from typing import Optional, Union

import numpy as np

from .errors import InputError
from .intervals import Interval, IntervalSet
from .wpm import wpm


class FOUCategory(str, Enum):
    LEFT_SHOULDER = "LeftShoulder"
    RIGHT_SHOULDER = "RightShoulder"
    INTERIOR = "Interior"
    LEFT_DROOP = "LeftDroop"
    RIGHT_DROOP = "RightDroop"
    INTERIOR_DROOP = "InteriorDroop"
    SIGNED_COMPOSITE = "SignedComposite"

    @property
    def is_droop(self) -> bool:
        return self in _DROOP

    def mirrored(self) -> FOUCategory:
        return _MIRROR.get(self, self)


_DROOP = {FOUCategory.LEFT_DROOP, FOUCategory.RIGHT_DROOP, FOUCategory.INTERIOR_DROOP}
_MIRROR = {
    FOUCategory.LEFT_SHOULDER: FOUCategory.RIGHT_SHOULDER,
    FOUCategory.RIGHT_SHOULDER: FOUCategory.LEFT_SHOULDER,
    FOUCategory.LEFT_DROOP: FOUCategory.RIGHT_DROOP,
    FOUCategory.RIGHT_DROOP: FOUCategory.LEFT_DROOP,
}


@dataclass(frozen=True)
class OverlapResult:
    """Common overlap of all intervals, or the endpoint mean when it is empty."""

    kind: str
    interval: Optional[Interval] = None
    mean_m: Optional[float] = None

    @property
    def is_null(self) -> bool:
        return self.kind == "Null"

    @property
    def left_attach(self) -> float:
        return self.mean_m if self.is_null else self.interval.lo

    @property
    def right_attach(self) -> float:
        return self.mean_m if self.is_null else self.interval.hi

    def mirror(self) -> OverlapResult:
        if self.is_null:
            return OverlapResult("Null", mean_m=-self.mean_m + 0.0)
        return OverlapResult("NonNull", interval=self.interval.mirror())


@dataclass(frozen=True)
class ReducedSets:
    left: tuple
    right: tuple


@dataclass(frozen=True)
class TrapezoidSpec:
    """Truncated trapezoid: linear rise from (lb, 0) to (lt, height), plateau,
    linear fall from (rt, height) to (rb, 0), and zero outside [clip_lo, clip_hi].

    Clipping inside the sloped edges is what produces a droop: the curve
    stops at the domain bound at an intermediate height.
    """

    lb: float
    lt: float
    rt: float
    rb: float
    clip_lo: float
    clip_hi: float
    height: float = 1.0

    def __post_init__(self):
        vals = [float(getattr(self, k)) for k in ("lb", "lt", "rt", "rb", "clip_lo", "clip_hi", "height")]
        if not all(math.isfinite(v) for v in vals):
            raise InputError(f"trapezoid parameters must be finite: {vals}")
        lb, lt, rt, rb, lo, hi, h = vals
        if not lb <= lt <= rt <= rb:
            raise InputError(f"trapezoid needs lb <= lt <= rt <= rb, got {lb}, {lt}, {rt}, {rb}")
        if not (lb <= lo <= lt and rt <= hi <= rb):
            raise InputError(f"clip range [{lo}, {hi}] must lie in [{lb}, {lt}] x [{rt}, {rb}]")
        if not 0 < h <= 1:
            raise InputError(f"height must lie in (0, 1], got {h}")
        for k, v in zip(("lb", "lt", "rt", "rb", "clip_lo", "clip_hi", "height"), vals):
            object.__setattr__(self, k, v)

    @property
    def support(self) -> Interval:
        return Interval(self.clip_lo, self.clip_hi)

    def params(self) -> tuple:
        return (self.lb, self.lt, self.rt, self.rb, self.clip_lo, self.clip_hi, self.height)

    def __call__(self, x):
        return eval_trapezoid(x, self)

    def mirror(self) -> TrapezoidSpec:
        neg = lambda v: -v + 0.0
        return TrapezoidSpec(
            neg(self.rb), neg(self.rt), neg(self.lt), neg(self.lb),
            neg(self.clip_hi), neg(self.clip_lo), self.height,
        )


@dataclass(frozen=True)
class DroopHeights:
    """Heights at which UMF/LMF meet the domain bounds; None on non-drooping sides."""

    umf_left: Optional[float] = None
    umf_right: Optional[float] = None
    lmf_left: Optional[float] = None
    lmf_right: Optional[float] = None

    def mirror(self) -> DroopHeights:
        return DroopHeights(self.umf_right, self.umf_left, self.lmf_right, self.lmf_left)


@dataclass(frozen=True)
class IT2MembershipFunction:
    umf: TrapezoidSpec
    lmf: TrapezoidSpec
    category: FOUCategory
    domain: tuple = (None, None)
    droop_heights: Optional[DroopHeights] = None
    overlap: Optional[OverlapResult] = None
    # exponent governing the (left, right) tail
    r: tuple = (1.0, 1.0)

    def upper(self, x):
        return eval_trapezoid(x, self.umf)

    def lower(self, x):
        return eval_trapezoid(x, self.lmf)

    def mirror(self) -> IT2MembershipFunction:
        lo, hi = self.domain
        return IT2MembershipFunction(
            umf=self.umf.mirror(),
            lmf=self.lmf.mirror(),
            category=self.category.mirrored(),
            domain=(None if hi is None else -hi + 0.0, None if lo is None else -lo + 0.0),
            droop_heights=None if self.droop_heights is None else self.droop_heights.mirror(),
            overlap=None if self.overlap is None else self.overlap.mirror(),
            r=(self.r[1], self.r[0]),
        )


@dataclass(frozen=True)
class SynthesisConfig:
    r: Union[float, str] = "auto"
    r0: float = 1.0
    r1: float = 1.0
    single_sme_pairs: int = 50
    rng_seed: int = 0

    def __post_init__(self):
        if self.r != "auto":
            r = float(self.r)
            if math.isnan(r) or r < 1:
                raise InputError(f"tail exponent r must be >= 1 or 'auto', got {self.r!r}")
            object.__setattr__(self, "r", r)
        for name in ("r0", "r1"):
            v = float(getattr(self, name))
            if math.isnan(v):
                raise InputError(f"{name} is NaN")
            object.__setattr__(self, name, v)
        if int(self.single_sme_pairs) < 1:
            raise InputError("single_sme_pairs must be positive")
        if int(self.rng_seed) < 0:
            raise InputError("rng_seed must be a nonnegative integer")


def compute_overlap(ivset: IntervalSet) -> OverlapResult:
    o_l = max(ivset.lefts)
    o_r = min(ivset.rights)
    if o_l < o_r:
        return OverlapResult("NonNull", interval=Interval(o_l, o_r))
    ends = ivset.lefts + ivset.rights
    # fmean can round one ulp outside [min, max] when endpoints coincide
    m = min(max(fmean(ends), min(ends)), max(ends))
    return OverlapResult("Null", mean_m=m)


def axis_intercept_fractions(intervals, lower_bound=None, upper_bound=None) -> tuple:
    """Fractions of intervals whose left end sits on the lower bound and whose
    right end sits on the upper bound. Unbounded sides give 0.

    Comparisons are exact: the endpoints are elicited literals.
    """
    intervals = list(intervals)
    n = len(intervals)
    at_lo = at_hi = 0
    for iv in intervals:
        if lower_bound is not None and iv.lo == lower_bound:
            at_lo += 1
        if upper_bound is not None and iv.hi == upper_bound:
            at_hi += 1
    return at_lo / n, at_hi / n


def classify_fou(ivset: IntervalSet, overlap: Optional[OverlapResult] = None) -> FOUCategory:
    if overlap is None:
        overlap = compute_overlap(ivset)
    x0, x1 = axis_intercept_fractions(ivset.intervals, ivset.lower_bound, ivset.upper_bound)
    partial_lo = 0 < x0 < 1
    partial_hi = 0 < x1 < 1
    if partial_lo and partial_hi:
        return FOUCategory.INTERIOR_DROOP
    if partial_lo and x1 == 0:
        return FOUCategory.LEFT_DROOP
    if x0 == 0 and partial_hi:
        return FOUCategory.RIGHT_DROOP
    if not overlap.is_null:
        if ivset.lower_bound is not None and overlap.interval.lo == ivset.lower_bound:
            return FOUCategory.LEFT_SHOULDER
        if ivset.upper_bound is not None and overlap.interval.hi == ivset.upper_bound:
            return FOUCategory.RIGHT_SHOULDER
    return FOUCategory.INTERIOR


def reduce_intervals(ivset: IntervalSet, overlap: OverlapResult) -> ReducedSets:
    if not overlap.is_null:
        o_l, o_r = overlap.interval.lo, overlap.interval.hi
        return ReducedSets(
            left=tuple(Interval(iv.lo, o_l) for iv in ivset),
            right=tuple(Interval(o_r, iv.hi) for iv in ivset),
        )
    m = overlap.mean_m
    left, right = [], []
    for iv in ivset:
        if iv.hi <= m:
            left.append(iv)
        if iv.lo >= m:
            right.append(iv)
        if iv.lo < m < iv.hi:
            left.append(Interval(iv.lo, m))
            right.append(Interval(m, iv.hi))
    # a side can only come out empty when m rounds onto an extreme endpoint;
    # the zero-width interval at m is the limit of the split there
    return ReducedSets(tuple(left) or (Interval(m, m),), tuple(right) or (Interval(m, m),))


def select_r(ivset: IntervalSet, overlap: Optional[OverlapResult] = None) -> float:
    """Consistency-driven tail exponent: total spread over overlap width."""
    if overlap is None:
        overlap = compute_overlap(ivset)
    if overlap.is_null:
        return math.inf
    return (max(ivset.rights) - min(ivset.lefts)) / overlap.interval.width


def _check_r(r: float) -> float:
    r = float(r)
    if math.isnan(r) or r < 1:
        raise InputError(f"tail exponent r must be >= 1, got {r}")
    return r


def _left_tail(reduced: ReducedSets, r: float) -> tuple:
    a = [iv.lo for iv in reduced.left]
    return wpm(a, r=2 - r), wpm(a, r=r)


def _right_tail(reduced: ReducedSets, r: float) -> tuple:
    b = [iv.hi for iv in reduced.right]
    return wpm(b, r=r), wpm(b, r=2 - r)


def shoulder_interior_params(reduced: ReducedSets, overlap: OverlapResult,
                             category: FOUCategory, r: float) -> tuple:
    """UMF/LMF trapezoids for shoulder and interior FOUs.

    The UMF tails use exponent ``r`` on the outer side and ``2 - r`` on the
    inner side; the LMF swaps them, so ``r = 1`` collapses the FOU to a
    type-1 set.
    """
    r = _check_r(r)
    if category not in (FOUCategory.LEFT_SHOULDER, FOUCategory.RIGHT_SHOULDER, FOUCategory.INTERIOR):
        raise InputError(f"{category.value} is not a shoulder or interior category")
    lt, rt = overlap.left_attach, overlap.right_attach

    if category is FOUCategory.LEFT_SHOULDER:
        u_lb = l_lb = lt
    else:
        u_lb, l_lb = _left_tail(reduced, r)
    if category is FOUCategory.RIGHT_SHOULDER:
        u_rb = l_rb = rt
    else:
        u_rb, l_rb = _right_tail(reduced, r)

    umf = TrapezoidSpec(u_lb, lt, rt, u_rb, u_lb, u_rb)
    lmf = TrapezoidSpec(l_lb, lt, rt, l_rb, l_lb, l_rb)
    return umf, lmf


def _droop_edge(bound: float, attach: float, y: float) -> tuple:
    """(root, top) of the line through (bound, y) and (attach, 1).

    A boundary height of 1 means the curve is flat up to the bound, which is
    represented as a plateau starting at the bound.
    """
    if y >= 1:
        return bound, bound
    if y <= 0:
        return bound, attach
    # zero of the line, written without dividing by attach - bound
    root = bound - y * (attach - bound) / (1 - y)
    if bound < attach:
        root = min(root, bound)
    else:
        root = max(root, bound)
    return root, attach


def droop_params(reduced: ReducedSets, overlap: OverlapResult, category: FOUCategory,
                 bounds: tuple, r0: float = 1.0, r1: float = 1.0, r: float = 1.0) -> tuple:
    """UMF/LMF trapezoids and boundary heights for droop FOUs.

    The UMF meets a bound at the fraction of reduced intervals touching it;
    the LMF meets it at ``wpm([y, 0], r0)`` (left) or ``wpm([y, 0], r1)``
    (right). A non-drooping side gets the ordinary interior tail built with ``r``.
    """
    if not category.is_droop:
        raise InputError(f"{category.value} is not a droop category")
    x_l, x_r = bounds
    lt, rt = overlap.left_attach, overlap.right_attach
    droop_left = category in (FOUCategory.LEFT_DROOP, FOUCategory.INTERIOR_DROOP)
    droop_right = category in (FOUCategory.RIGHT_DROOP, FOUCategory.INTERIOR_DROOP)
    heights = {}

    if droop_left:
        if x_l is None:
            raise InputError("a left droop needs a finite lower bound")
        y_up = sum(iv.lo == x_l for iv in reduced.left) / len(reduced.left)
        y_lo = wpm([y_up, 0.0], [1.0, 1.0], r0)
        u_lb, u_lt = _droop_edge(x_l, lt, y_up)
        l_lb, l_lt = _droop_edge(x_l, lt, y_lo)
        u_clo = l_clo = x_l
        heights.update(umf_left=y_up, lmf_left=y_lo)
    else:
        u_lb, l_lb = _left_tail(reduced, _check_r(r))
        u_lt = l_lt = lt
        u_clo, l_clo = u_lb, l_lb

    if droop_right:
        if x_r is None:
            raise InputError("a right droop needs a finite upper bound")
        y_up = sum(iv.hi == x_r for iv in reduced.right) / len(reduced.right)
        y_lo = wpm([y_up, 0.0], [1.0, 1.0], r1)
        u_rb, u_rt = _droop_edge(x_r, rt, y_up)
        l_rb, l_rt = _droop_edge(x_r, rt, y_lo)
        u_chi = l_chi = x_r
        heights.update(umf_right=y_up, lmf_right=y_lo)
    else:
        u_rb, l_rb = _right_tail(reduced, _check_r(r))
        u_rt = l_rt = rt
        u_chi, l_chi = u_rb, l_rb

    umf = TrapezoidSpec(u_lb, u_lt, u_rt, u_rb, u_clo, u_chi)
    lmf = TrapezoidSpec(l_lb, l_lt, l_rt, l_rb, l_clo, l_chi)
    return umf, lmf, DroopHeights(**heights)


def eval_trapezoid(x, spec: TrapezoidSpec):
    """Membership of ``x`` (scalar or array) in a truncated trapezoid."""
    xs = np.asarray(x, dtype=float)
    h = spec.height
    out = np.zeros_like(xs)

    rise = (xs >= spec.clip_lo) & (xs <= spec.lt)
    if spec.lt > spec.lb:
        out[rise] = h * (xs[rise] - spec.lb) / (spec.lt - spec.lb)
    else:
        out[rise] = h
    out[(xs > spec.lt) & (xs < spec.rt)] = h
    fall = (xs >= spec.rt) & (xs <= spec.clip_hi)
    if spec.rb > spec.rt:
        out[fall] = np.maximum(out[fall], h * (spec.rb - xs[fall]) / (spec.rb - spec.rt))
    else:
        out[fall] = h
    np.clip(out, 0.0, h, out=out)
    return float(out) if out.ndim == 0 else out


def synthesize(ivset: IntervalSet, cfg: SynthesisConfig = SynthesisConfig()) -> IT2MembershipFunction:
    """IT2 membership function for a set of nonnegative intervals."""
    if min(ivset.lefts) < 0:
        raise InputError("synthesize needs nonnegative intervals; use synthesize_signed")
    overlap = compute_overlap(ivset)
    category = classify_fou(ivset, overlap)
    reduced = reduce_intervals(ivset, overlap)
    r = select_r(ivset, overlap) if cfg.r == "auto" else _check_r(cfg.r)
    bounds = (ivset.lower_bound, ivset.upper_bound)
    if category.is_droop:
        umf, lmf, heights = droop_params(reduced, overlap, category, bounds, cfg.r0, cfg.r1, r)
    else:
        umf, lmf = shoulder_interior_params(reduced, overlap, category, r)
        heights = None
    return IT2MembershipFunction(umf, lmf, category, bounds, heights, overlap, (r, r))


def _compose(neg: IT2MembershipFunction, pos: IT2MembershipFunction,
             overlap: OverlapResult, domain: tuple) -> IT2MembershipFunction:
    # left tail from the nonpositive group, right tail from the nonnegative
    # group, unity plateau between their attach points
    def join(left: TrapezoidSpec, right: TrapezoidSpec) -> TrapezoidSpec:
        return TrapezoidSpec(left.lb, left.lt, right.rt, right.rb, left.clip_lo, right.clip_hi)

    dn = neg.droop_heights or DroopHeights()
    dp = pos.droop_heights or DroopHeights()
    heights = DroopHeights(dn.umf_left, dp.umf_right, dn.lmf_left, dp.lmf_right)
    if heights == DroopHeights():
        heights = None
    return IT2MembershipFunction(
        umf=join(neg.umf, pos.umf),
        lmf=join(neg.lmf, pos.lmf),
        category=FOUCategory.SIGNED_COMPOSITE,
        domain=domain,
        droop_heights=heights,
        overlap=overlap,
        r=(neg.r[0], pos.r[1]),
    )


def synthesize_signed(ivset: IntervalSet, cfg: SynthesisConfig = SynthesisConfig()) -> IT2MembershipFunction:
    """IT2 membership function for intervals of any sign.

    All-nonpositive sets are mirrored, synthesized and mirrored back. Mixed
    sets are split at zero and the two halves synthesized separately.
    """
    if min(ivset.lefts) >= 0:
        return synthesize(ivset, cfg)
    if max(ivset.rights) <= 0:
        return synthesize(ivset.mirror(), cfg).mirror()

    pos = [Interval(max(iv.lo, 0.0), iv.hi) for iv in ivset if iv.hi > 0 or iv.lo >= 0]
    neg = [Interval(iv.lo, min(iv.hi, 0.0)) for iv in ivset if iv.lo < 0]
    pos_mf = synthesize(IntervalSet(tuple(pos), None, ivset.upper_bound), cfg)
    neg_set = IntervalSet(tuple(neg), ivset.lower_bound, None)
    neg_mf = synthesize(neg_set.mirror(), cfg).mirror()
    domain = (ivset.lower_bound, ivset.upper_bound)
    return _compose(neg_mf, pos_mf, compute_overlap(ivset), domain)


def expand_single_sme(min_iv: Interval, max_iv: Interval, pairs: int = 50,
                      rng=None, bounds=(None, None)) -> IntervalSet:
    """Turn one expert's (minimum range, maximum range) answer into an interval set.

    Each synthetic interval takes its left end uniformly from ``min_iv`` and
    its right end uniformly from ``max_iv``. ``rng`` is a numpy Generator or
    a seed.
    """
    if min_iv.hi > max_iv.lo:
        raise InputError(
            f"minimum range [{min_iv.lo}, {min_iv.hi}] overlaps maximum range [{max_iv.lo}, {max_iv.hi}]"
        )
    if int(pairs) < 1:
        raise InputError("need at least one pair")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    u = rng.uniform(min_iv.lo, min_iv.hi, int(pairs))
    v = rng.uniform(max_iv.lo, max_iv.hi, int(pairs))
    # uniform() is half-open; clamp guards against rounding past the range end
    u = np.clip(u, min_iv.lo, min_iv.hi)
    v = np.clip(v, max_iv.lo, max_iv.hi)
    return IntervalSet(tuple(Interval(a, b) for a, b in zip(u, v)), *bounds)
