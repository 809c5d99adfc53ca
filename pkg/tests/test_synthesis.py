import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from it2bayes import (
    FOUCategory,
    InputError,
    Interval,
    IntervalSet,
    SynthesisConfig,
    TrapezoidSpec,
    axis_intercept_fractions,
    classify_fou,
    compute_overlap,
    eval_trapezoid,
    expand_single_sme,
    reduce_intervals,
    select_r,
    synthesize,
    synthesize_signed,
)
from worked_examples import (
    INTERIOR_DROOP,
    LEFT_DROOP,
    MIXED_CLOSING,
    MIXED_OPENING,
    ODDS_CLOSING,
    ODDS_OPENING,
    PRODUCTION,
    PRODUCTION_LEFT,
    PRODUCTION_NULL,
    PRODUCTION_NULL_LEFT,
    PRODUCTION_NULL_RIGHT,
    PRODUCTION_RIGHT,
    RIGHT_DROOP,
    ivs,
    prob,
)

Cat = FOUCategory


def as_pairs(intervals):
    return [(iv.lo, iv.hi) for iv in intervals]


class TestOverlap:
    def test_nonnull(self):
        ov = compute_overlap(ivs(PRODUCTION))
        assert not ov.is_null
        assert ov.interval == Interval(1.0e6, 1.1e6)

    def test_null_uses_endpoint_mean(self):
        ov = compute_overlap(ivs(PRODUCTION_NULL))
        assert ov.is_null and ov.interval is None
        assert ov.mean_m == 1.12e6

    def test_touching_is_null(self):
        ov = compute_overlap(ivs([(0, 1), (1, 2)]))
        assert ov.is_null and ov.mean_m == 1.0


class TestFractions:
    def test_counts_exact_hits(self):
        s = prob(LEFT_DROOP)
        assert axis_intercept_fractions(s.intervals, 0.0, 1.0) == (0.6, 0.0)

    def test_unbounded_sides_give_zero(self):
        assert axis_intercept_fractions(ivs(LEFT_DROOP).intervals) == (0.0, 0.0)


class TestClassify:
    @pytest.mark.parametrize("pairs,bounds,expected", [
        (PRODUCTION, (0, None), Cat.INTERIOR),
        (PRODUCTION_NULL, (0, None), Cat.INTERIOR),
        (LEFT_DROOP, (0, 1), Cat.LEFT_DROOP),
        (RIGHT_DROOP, (0, 1), Cat.RIGHT_DROOP),
        (INTERIOR_DROOP, (0, 1), Cat.INTERIOR_DROOP),
        ([(0, 0.3), (0, 0.5), (0, 0.4)], (0, 1), Cat.LEFT_SHOULDER),
        ([(0.6, 1), (0.7, 1), (0.5, 1)], (0, 1), Cat.RIGHT_SHOULDER),
        ([(0, 1), (0, 1)], (0, 1), Cat.LEFT_SHOULDER),
    ])
    def test_examples(self, pairs, bounds, expected):
        assert classify_fou(ivs(pairs, bounds)) is expected

    def test_is_droop(self):
        assert {c for c in Cat if c.is_droop} == {Cat.LEFT_DROOP, Cat.RIGHT_DROOP, Cat.INTERIOR_DROOP}


class TestReduce:
    def test_nonnull_trims_overlap(self):
        s = ivs(PRODUCTION)
        red = reduce_intervals(s, compute_overlap(s))
        assert as_pairs(red.left) == PRODUCTION_LEFT
        assert as_pairs(red.right) == PRODUCTION_RIGHT

    def test_null_splits_at_mean(self):
        s = ivs(PRODUCTION_NULL)
        red = reduce_intervals(s, compute_overlap(s))
        assert as_pairs(red.left) == PRODUCTION_NULL_LEFT
        assert as_pairs(red.right) == PRODUCTION_NULL_RIGHT

    def test_interior_droop_sets(self):
        s = prob(INTERIOR_DROOP)
        red = reduce_intervals(s, compute_overlap(s))
        assert len(red.left) == 3 and all(iv.lo == 0 for iv in red.left)
        assert len(red.right) == 4 and sum(iv.hi == 1 for iv in red.right) == 1


class TestSelectR:
    def test_spread_over_overlap(self):
        assert select_r(ivs(PRODUCTION)) == pytest.approx(7.0, rel=1e-12)

    def test_null_is_infinite(self):
        assert select_r(ivs(PRODUCTION_NULL)) == math.inf

    @pytest.mark.parametrize("r", [0.5, math.nan, -3])
    def test_config_rejects_small_r(self, r):
        with pytest.raises(InputError):
            SynthesisConfig(r=r)


class TestShoulderInterior:
    def test_r_one_is_type1(self):
        mf = synthesize(ivs(PRODUCTION), SynthesisConfig(r=1.0))
        assert mf.umf == mf.lmf
        assert mf.umf.lb == pytest.approx(np.mean([a for a, _ in PRODUCTION]), rel=1e-15)
        assert mf.umf.rb == pytest.approx(np.mean([b for _, b in PRODUCTION]), rel=1e-15)
        assert (mf.umf.lt, mf.umf.rt) == (1.0e6, 1.1e6)

    def test_large_r_reaches_extremes(self):
        mf = synthesize(ivs(PRODUCTION), SynthesisConfig(r=1e6))
        assert mf.umf.support.lo == pytest.approx(8e5, rel=1e-3)
        assert mf.umf.support.hi == pytest.approx(1.5e6, rel=1e-3)
        assert mf.lmf.support.lo == pytest.approx(1.0e6, rel=1e-3)
        assert mf.lmf.support.hi == pytest.approx(1.1e6, rel=1e-3)

    def test_infinite_r_is_exact(self):
        mf = synthesize(ivs(PRODUCTION), SynthesisConfig(r=math.inf))
        assert mf.umf.support == Interval(8e5, 1.5e6)
        assert mf.lmf.support == Interval(1.0e6, 1.1e6)

    def test_left_shoulder_plateau_reaches_bound(self):
        mf = synthesize(ivs([(0, 0.3), (0, 0.5), (0, 0.4)], (0, 1)), SynthesisConfig(r=3))
        assert mf.category is Cat.LEFT_SHOULDER
        assert mf.upper(0.0) == 1.0 and mf.lower(0.0) == 1.0

    def test_full_domain_is_rectangle(self):
        mf = synthesize(ivs([(0, 1), (0, 1)], (0, 1)))
        xs = np.linspace(0, 1, 11)
        assert np.all(mf.upper(xs) == 1.0) and np.all(mf.lower(xs) == 1.0)


class TestDroop:
    @pytest.mark.parametrize("pairs,expected", [
        (LEFT_DROOP, (0.6, None, 0.3, None)),
        (RIGHT_DROOP, (None, 0.75, None, 0.375)),
        (INTERIOR_DROOP, (1.0, 0.25, 0.5, 0.125)),
    ])
    def test_boundary_heights(self, pairs, expected):
        h = synthesize(prob(pairs), SynthesisConfig(r0=1, r1=1)).droop_heights
        assert (h.umf_left, h.umf_right, h.lmf_left, h.lmf_right) == expected

    def test_heights_are_curve_values_at_bounds(self):
        mf = synthesize(prob(INTERIOR_DROOP))
        assert mf.upper(0.0) == pytest.approx(1.0, abs=1e-12)
        assert mf.lower(0.0) == pytest.approx(0.5, abs=1e-12)
        assert mf.upper(1.0) == pytest.approx(0.25, abs=1e-12)
        assert mf.lower(1.0) == pytest.approx(0.125, abs=1e-12)

    def test_left_edge_geometry(self):
        # UMF edge runs through (0, 0.6) and (0.2, 1)
        mf = synthesize(prob(LEFT_DROOP))
        assert mf.upper(0.1) == pytest.approx(0.8, abs=1e-12)
        assert mf.upper(0.0) == pytest.approx(0.6, abs=1e-12)
        assert mf.upper(-0.05) == 0.0

    def test_lmf_exponent_lowers_height(self):
        lo = synthesize(prob(LEFT_DROOP), SynthesisConfig(r0=-1)).droop_heights.lmf_left
        hi = synthesize(prob(LEFT_DROOP), SynthesisConfig(r0=1)).droop_heights.lmf_left
        assert lo == 0.0 and hi == 0.3


class TestTrapezoid:
    def test_rejects_unordered(self):
        with pytest.raises(InputError):
            TrapezoidSpec(0.5, 0.2, 0.6, 0.8, 0.5, 0.8)

    def test_scalar_and_vector(self):
        t = TrapezoidSpec(0, 1, 2, 4, 0, 4)
        assert isinstance(eval_trapezoid(0.5, t), float)
        assert eval_trapezoid(np.array([-1, 0.5, 1.5, 3, 5]), t).tolist() == [0, 0.5, 1, 0.5, 0]

    def test_clipping(self):
        t = TrapezoidSpec(-1, 1, 2, 3, 0, 3)
        assert t(0.0) == 0.5
        assert t(-0.5) == 0.0

    def test_mirror_negates(self):
        t = TrapezoidSpec(-1, 1, 2, 3, 0, 3, 0.9)
        assert t.mirror() == TrapezoidSpec(-3, -2, -1, 1, -3, 0, 0.9)


@st.composite
def interval_sets(draw, lo=0.0, hi=100.0, bounded=False):
    n = draw(st.integers(1, 8))
    pairs = []
    for _ in range(n):
        a, b = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=2, max_size=2)))
        pairs.append((a, b))
    return ivs(pairs, (lo, hi) if bounded else (None, None))


@settings(max_examples=150)
@given(interval_sets(bounded=True), st.sampled_from([1.0, 2.0, 7.5, math.inf, "auto"]))
def test_umf_dominates_lmf(s, r):
    mf = synthesize(s, SynthesisConfig(r=r))
    xs = np.linspace(-1, 101, 409)
    assert np.all(mf.upper(xs) >= mf.lower(xs))


@settings(max_examples=100)
@given(interval_sets(bounded=True), st.randoms(use_true_random=False))
def test_permutation_invariant(s, rnd):
    shuffled = list(s.intervals)
    rnd.shuffle(shuffled)
    a = synthesize(s, SynthesisConfig(r=3.0))
    b = synthesize(IntervalSet(tuple(shuffled), s.lower_bound, s.upper_bound), SynthesisConfig(r=3.0))
    np.testing.assert_allclose(a.umf.params(), b.umf.params(), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(a.lmf.params(), b.lmf.params(), rtol=1e-12, atol=1e-12)
    assert a.category is b.category


@settings(max_examples=100)
@given(interval_sets(lo=0.5), st.sampled_from([1.0, 4.0, math.inf, "auto"]))
def test_mirror_symmetry(s, r):
    cfg = SynthesisConfig(r=r)
    assert synthesize_signed(s.mirror(), cfg) == synthesize(s, cfg).mirror()


@settings(max_examples=60)
@given(interval_sets(lo=30.0), st.floats(0, 20, allow_nan=False))
def test_widening_never_shrinks_umf_support(s, grow):
    # fixed r and unbounded domain; a widened extreme moves the tail outward
    if compute_overlap(s).is_null:
        return
    widened = list(s.intervals)
    widened[0] = Interval(widened[0].lo - grow, widened[0].hi + grow)
    base = synthesize(s, SynthesisConfig(r=5.0)).umf.support
    wide = synthesize(IntervalSet(tuple(widened)), SynthesisConfig(r=5.0)).umf.support
    assert wide.lo <= base.lo and wide.hi >= base.hi


class TestSigned:
    def test_rejects_negative_in_plain_synthesize(self):
        with pytest.raises(InputError):
            synthesize(ivs(ODDS_OPENING))

    @pytest.mark.parametrize("pairs", [ODDS_OPENING, ODDS_CLOSING])
    def test_negative_odds(self, pairs):
        mf = synthesize_signed(ivs(pairs), SynthesisConfig(r=math.inf))
        lo, hi = min(a for a, _ in pairs), max(b for _, b in pairs)
        assert mf.umf.support == Interval(lo, hi)
        assert mf.lmf.support.lo >= lo and mf.lmf.support.hi <= hi

    @pytest.mark.parametrize("pairs", [MIXED_OPENING, MIXED_CLOSING])
    def test_mixed_sign_composite(self, pairs):
        mf = synthesize_signed(ivs(pairs), SynthesisConfig(r=math.inf))
        assert mf.category is Cat.SIGNED_COMPOSITE
        assert mf.umf.support == Interval(min(a for a, _ in pairs), max(b for _, b in pairs))
        assert mf.upper(0.0) == 1.0

    @pytest.mark.parametrize("pairs", [MIXED_OPENING, MIXED_CLOSING, ODDS_OPENING, ODDS_CLOSING])
    def test_auto_r_runs(self, pairs):
        mf = synthesize_signed(ivs(pairs))
        lo, hi = min(a for a, _ in pairs), max(b for _, b in pairs)
        sup = mf.umf.support
        assert lo <= sup.lo and sup.hi <= hi
        xs = np.linspace(lo, hi, 501)
        assert np.all(mf.upper(xs) >= mf.lower(xs))


class TestSingleSME:
    def test_deterministic(self):
        a = expand_single_sme(Interval(0.2, 0.3), Interval(0.6, 0.8), 20, rng=7)
        b = expand_single_sme(Interval(0.2, 0.3), Interval(0.6, 0.8), 20, rng=7)
        assert a == b and len(a) == 20

    def test_ranges_respected(self):
        s = expand_single_sme(Interval(0.2, 0.3), Interval(0.6, 0.8), 200, rng=1)
        assert all(0.2 <= iv.lo <= 0.3 and 0.6 <= iv.hi <= 0.8 for iv in s)

    def test_degenerate_ranges(self):
        s = expand_single_sme(Interval(0.3, 0.3), Interval(0.7, 0.7), 5, rng=0)
        assert set(s.intervals) == {Interval(0.3, 0.7)}

    def test_uniform_mean(self):
        s = expand_single_sme(Interval(0.0, 0.4), Interval(0.6, 1.0), 1000, rng=3)
        # three standard errors of a uniform on a 0.4-wide range
        tol = 3 * 0.4 / math.sqrt(12 * 1000)
        assert abs(np.mean(s.lefts) - 0.2) < tol
        assert abs(np.mean(s.rights) - 0.8) < tol

    def test_overlapping_ranges_rejected(self):
        with pytest.raises(InputError):
            expand_single_sme(Interval(0.2, 0.7), Interval(0.6, 0.8))
