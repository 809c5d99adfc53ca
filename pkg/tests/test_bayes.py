import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from it2bayes import (
    AlphaCutFOU,
    BayesInputs,
    DegenerateInputsError,
    InputError,
    Interval,
    SynthesisConfig,
    adjust_denominator,
    alpha_cuts,
    crisp_cuts,
    fou_from_cuts,
    posterior_fou,
    product_fou,
    synthesize,
)
from it2bayes.bayes import alpha_grid, curves_from_cuts
from worked_examples import BAYES_1, BAYES_2, prob

ROLES = ("likelihood", "prior", "evidence")


def mfs_for(example, cfg=SynthesisConfig()):
    return {role: synthesize(prob(example[role]), cfg) for role in ROLES}


def run(example, levels=101):
    mfs = mfs_for(example)
    cuts = {role: alpha_cuts(mf, levels) for role, mf in mfs.items()}
    return posterior_fou(BayesInputs(cuts["likelihood"], cuts["prior"], cuts["evidence"]))


def bisect(f, lo, hi, iters=80):
    """Root of a sign change of f on [lo, hi]."""
    flo = f(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return (lo + hi) / 2


class TestAdjustDenominator:
    @pytest.mark.parametrize("prod,ev,expected", [
        ((0.1, 0.5), (0.4, 0.7), (0.5, 0.7)),
        ((0.1, 0.5), (0.6, 0.7), (0.6, 0.7)),
        ((0.1, 0.5), (0.2, 0.3), (0.5, 0.5)),
        ((0.1, 0.5), (0.5, 0.9), (0.5, 0.9)),
    ])
    def test_examples(self, prod, ev, expected):
        assert adjust_denominator(Interval(*prod), Interval(*ev)) == Interval(*expected)


class TestCuts:
    def test_grid(self):
        g = alpha_grid(101)
        assert len(g) == 101 and g[0] == 0.0 and g[-1] == 1.0 and g[8] == 0.08
        with pytest.raises(InputError):
            alpha_grid(1)

    def test_trapezoid_cut_oracle(self):
        # UMF left edge of this set runs through (0, 0.6) and (0.2, 1)
        cuts = alpha_cuts(synthesize(prob([(0, 0.3), (0, 0.5), (0, 0.3), (0.1, 0.5), (0.2, 0.4)])), 11)
        assert cuts.umf_cuts[8].lo == pytest.approx(0.1, abs=1e-12)
        assert cuts.umf_cuts[5].lo == 0.0
        assert cuts.umf_cuts[10] == Interval(0.2, 0.3)

    @pytest.mark.parametrize("example", [BAYES_1, BAYES_2])
    def test_inputs_nested_and_lmf_inside(self, example):
        for mf in mfs_for(example).values():
            cuts = alpha_cuts(mf)
            assert cuts.is_nested()
            assert all(l in u for u, l in zip(cuts.umf_cuts, cuts.lmf_cuts))

    def test_rejects_mismatched_grids(self):
        with pytest.raises(InputError):
            BayesInputs(crisp_cuts(0.5, 11), crisp_cuts(0.5, 11), crisp_cuts(0.5, 21))

    def test_rejects_cut_outside_unit(self):
        bad = AlphaCutFOU((0.0, 1.0), (Interval(0.5, 1.2),) * 2, (Interval(0.6, 0.7),) * 2)
        with pytest.raises(InputError):
            BayesInputs(bad, crisp_cuts(0.5, 2), crisp_cuts(0.6, 2))


class TestPosterior:
    def test_crisp(self):
        res = posterior_fou(BayesInputs(crisp_cuts(0.5), crisp_cuts(0.3), crisp_cuts(0.6)))
        assert all(c == Interval(0.25, 0.25) for c in res.fou.umf_cuts + res.fou.lmf_cuts)
        assert not any(res.umf_adjusted + res.lmf_adjusted)

    def test_zero_numerator(self):
        res = posterior_fou(BayesInputs(crisp_cuts(0.0), crisp_cuts(0.3), crisp_cuts(0.6)))
        assert res.fou.umf_cuts[0] == Interval(0.0, 0.0)

    def test_all_zero_is_degenerate(self):
        with pytest.raises(DegenerateInputsError):
            posterior_fou(BayesInputs(crisp_cuts(0.0), crisp_cuts(0.3), crisp_cuts(0.0)))

    @pytest.mark.parametrize("example", [BAYES_1, BAYES_2])
    def test_valid_and_nested(self, example):
        res = run(example)
        assert res.fou.is_nested()
        for cut in res.fou.umf_cuts + res.fou.lmf_cuts:
            assert 0.0 <= cut.lo <= cut.hi <= 1.0

    def test_first_example_adjustment_region(self):
        res = run(BAYES_1)
        fired = [a for a, f in zip(res.fou.alphas, res.umf_adjusted) if f]
        assert fired and fired == list(res.fou.alphas[:len(fired)])
        assert 0 < fired[-1] < 0.3
        assert all(c.hi == 1.0 for c, f in zip(res.fou.umf_cuts, res.umf_adjusted) if f)
        assert not any(res.lmf_adjusted)

    def test_second_example_never_adjusts(self):
        res = run(BAYES_2)
        assert not any(res.umf_adjusted + res.lmf_adjusted)

    def test_threshold_matches_continuous_crossing(self):
        # the UMF posterior reaches 1 up to the level where the evidence
        # cut's left end passes the product cut's right end
        mfs = mfs_for(BAYES_1)
        lik, pri, ev = mfs["likelihood"].umf, mfs["prior"].umf, mfs["evidence"].umf

        def right(spec, a):
            return min((1 - a) * spec.rb + a * spec.rt, spec.clip_hi)

        def left(spec, a):
            return max((1 - a) * spec.lb + a * spec.lt, spec.clip_lo)

        alpha_star = bisect(lambda a: left(ev, a) - right(lik, a) * right(pri, a), 0.0, 1.0)
        sampled = fou_from_cuts(run(BAYES_1).fou)
        assert sampled.x[-1] == 1.0
        assert sampled.umf[-1] == pytest.approx(alpha_star, abs=0.01)


@settings(max_examples=300)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_crisp_consistency(lik, pri, slack):
    ev = lik * pri + slack * (1 - lik * pri)
    if ev == 0:
        return
    res = posterior_fou(BayesInputs(crisp_cuts(lik, 5), crisp_cuts(pri, 5), crisp_cuts(ev, 5)))
    expected = min(lik * pri / ev, 1.0)
    for cut in res.fou.umf_cuts + res.fou.lmf_cuts:
        assert cut.lo == pytest.approx(expected, abs=1e-12)
        assert cut.hi == pytest.approx(expected, abs=1e-12)


@settings(max_examples=200)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.0, 0.04))
def test_posterior_increases_with_prior(lik, pri, bump):
    ev = 0.99
    low = posterior_fou(BayesInputs(crisp_cuts(lik, 3), crisp_cuts(pri, 3), crisp_cuts(ev, 3)))
    high = posterior_fou(BayesInputs(crisp_cuts(lik, 3), crisp_cuts(pri + bump, 3), crisp_cuts(ev, 3)))
    assert high.fou.umf_cuts[0].lo >= low.fou.umf_cuts[0].lo


def test_product_is_elementwise():
    a = alpha_cuts(synthesize(prob(BAYES_1["likelihood"])), 11)
    b = alpha_cuts(synthesize(prob(BAYES_1["prior"])), 11)
    p = product_fou(a, b)
    for k in range(11):
        assert p.umf_cuts[k] == Interval(a.umf_cuts[k].lo * b.umf_cuts[k].lo, a.umf_cuts[k].hi * b.umf_cuts[k].hi)


class TestSampling:
    def test_round_trip_through_curves(self):
        mf = synthesize(prob(BAYES_1["likelihood"]))
        cuts = alpha_cuts(mf, 101)
        x = np.linspace(0.3, 0.7, 401)
        umf, lmf = curves_from_cuts(cuts, x)
        # trapezoids are linear in alpha, so interpolating the cut table is exact
        np.testing.assert_allclose(umf, mf.upper(x), atol=1e-12)
        np.testing.assert_allclose(lmf, mf.lower(x), atol=1e-12)

    def test_rectangle(self):
        iv = Interval(0.2, 0.6)
        cuts = AlphaCutFOU((0.0, 0.5, 1.0), (iv,) * 3, (iv,) * 3)
        fou = fou_from_cuts(cuts, 5)
        assert fou.x.tolist() == pytest.approx([0.2, 0.3, 0.4, 0.5, 0.6])
        assert fou.umf.tolist() == [1.0] * 5 and fou.lmf.tolist() == [1.0] * 5

    def test_lmf_below_umf(self):
        fou = fou_from_cuts(run(BAYES_1).fou)
        assert np.all(fou.lmf <= fou.umf) and fou.umf.max() == 1.0
