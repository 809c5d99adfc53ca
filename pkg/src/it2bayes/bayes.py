"""Bayes' theorem over interval type-2 membership functions.

Every membership level is handled independently: the likelihood and prior
alpha-cuts are multiplied, the evidence cut is pushed to the right of the
product wherever the two overlap (evidence can never be smaller than the
joint probability), and the product is divided by the adjusted evidence.
Upper and lower membership channels are processed separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputsError, InputError
from .intervals import Interval, iv_div, iv_mul
from .synthesis import IT2MembershipFunction, TrapezoidSpec

DEFAULT_ALPHA_LEVELS = 101


@dataclass(frozen=True)
class AlphaCutFOU:
    """Discretized FOU: one UMF cut and one LMF cut per membership level."""

    alphas: tuple
    umf_cuts: tuple
    lmf_cuts: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) < 2 or len(self.umf_cuts) != len(alphas) or len(self.lmf_cuts) != len(alphas):
            raise InputError("alpha grid and cut lists must have equal length >= 2")
        if any(b <= a for a, b in zip(alphas, alphas[1:])) or alphas[0] < 0 or alphas[-1] > 1:
            raise InputError("alpha levels must be strictly increasing within [0, 1]")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "umf_cuts", tuple(self.umf_cuts))
        object.__setattr__(self, "lmf_cuts", tuple(self.lmf_cuts))

    def __len__(self) -> int:
        return len(self.alphas)

    def is_nested(self) -> bool:
        for cuts in (self.umf_cuts, self.lmf_cuts):
            for lower, upper in zip(cuts, cuts[1:]):
                if upper not in lower:
                    return False
        return True

    def as_array(self) -> np.ndarray:
        """Rows of (alpha, umf_lo, umf_hi, lmf_lo, lmf_hi)."""
        return np.array([
            (a, u.lo, u.hi, l.lo, l.hi)
            for a, u, l in zip(self.alphas, self.umf_cuts, self.lmf_cuts)
        ])


@dataclass(frozen=True)
class BayesInputs:
    likelihood: AlphaCutFOU
    prior: AlphaCutFOU
    evidence: AlphaCutFOU

    def __post_init__(self):
        grids = {self.likelihood.alphas, self.prior.alphas, self.evidence.alphas}
        if len(grids) != 1:
            raise InputError("likelihood, prior and evidence must share one alpha grid")
        for name in ("likelihood", "prior", "evidence"):
            fou = getattr(self, name)
            for iv in fou.umf_cuts + fou.lmf_cuts:
                if iv.lo < 0 or iv.hi > 1:
                    raise InputError(f"{name} cut [{iv.lo}, {iv.hi}] leaves [0, 1]")


@dataclass(frozen=True)
class PosteriorResult:
    """Posterior cuts plus, per level, whether the evidence cut was adjusted."""

    fou: AlphaCutFOU
    product: AlphaCutFOU
    umf_adjusted: tuple
    lmf_adjusted: tuple


def alpha_grid(levels: int) -> tuple:
    if int(levels) < 2:
        raise InputError("need at least two alpha levels")
    n = int(levels) - 1
    return tuple(k / n for k in range(n + 1))


def _trapezoid_cuts(spec: TrapezoidSpec, alphas: np.ndarray) -> tuple:
    # lb + a*(lt - lb) is exact for a vertical edge; clamping to the plateau
    # keeps lo <= lt <= rt <= hi under rounding
    lo = np.clip(spec.lb + alphas * (spec.lt - spec.lb), spec.clip_lo, spec.lt)
    hi = np.clip(spec.rb - alphas * (spec.rb - spec.rt), spec.rt, spec.clip_hi)
    # float rounding must not break nesting
    return np.maximum.accumulate(lo), np.minimum.accumulate(hi)


def alpha_cuts(mf: IT2MembershipFunction, levels: int = DEFAULT_ALPHA_LEVELS) -> AlphaCutFOU:
    """Cut both curves of ``mf`` at ``levels`` evenly spaced membership levels."""
    for spec in (mf.umf, mf.lmf):
        if spec.height != 1.0:
            raise InputError("alpha cuts up to 1 need a normal membership function")
    alphas = alpha_grid(levels)
    a = np.asarray(alphas)
    u_lo, u_hi = _trapezoid_cuts(mf.umf, a)
    l_lo, l_hi = _trapezoid_cuts(mf.lmf, a)
    l_lo = np.maximum(l_lo, u_lo)
    l_hi = np.minimum(l_hi, u_hi)
    return AlphaCutFOU(
        alphas,
        tuple(Interval(x, y) for x, y in zip(u_lo, u_hi)),
        tuple(Interval(x, y) for x, y in zip(l_lo, l_hi)),
    )


def crisp_cuts(value: float, levels: int = DEFAULT_ALPHA_LEVELS) -> AlphaCutFOU:
    """Zero-width FOU at ``value`` on every level."""
    iv = Interval(value, value)
    alphas = alpha_grid(levels)
    return AlphaCutFOU(alphas, (iv,) * len(alphas), (iv,) * len(alphas))


def product_fou(a: AlphaCutFOU, b: AlphaCutFOU) -> AlphaCutFOU:
    if a.alphas != b.alphas:
        raise InputError("alpha grids differ")
    return AlphaCutFOU(
        a.alphas,
        tuple(iv_mul(x, y) for x, y in zip(a.umf_cuts, b.umf_cuts)),
        tuple(iv_mul(x, y) for x, y in zip(a.lmf_cuts, b.lmf_cuts)),
    )


def adjust_denominator(prod_cut: Interval, ev_cut: Interval) -> Interval:
    """Move an evidence cut that overlaps the product cut to its right.

    Returns the evidence cut unchanged when it already lies at or beyond
    the product's right endpoint.
    """
    pe_r = prod_cut.hi
    if ev_cut.lo < pe_r:
        return Interval(max(pe_r, ev_cut.lo), max(pe_r, ev_cut.hi))
    return ev_cut


def _posterior_cut(num: Interval, ev: Interval, level: float) -> tuple:
    fired = ev.lo < num.hi
    den = adjust_denominator(num, ev)
    if den.lo <= 0:
        # only reachable with a numerator pinned at zero
        if ev.hi > 0:
            return Interval(0.0, 0.0), fired
        raise DegenerateInputsError(
            f"numerator and evidence are both identically zero at alpha={level:g}"
        )
    q = iv_div(num, den)
    hi = min(q.hi, 1.0)
    return Interval(min(q.lo, hi), hi), fired


def posterior_fou(inputs: BayesInputs) -> PosteriorResult:
    prod = product_fou(inputs.likelihood, inputs.prior)
    ev = inputs.evidence
    umf, lmf, u_flag, l_flag = [], [], [], []
    for k, level in enumerate(prod.alphas):
        cut, fired = _posterior_cut(prod.umf_cuts[k], ev.umf_cuts[k], level)
        umf.append(cut)
        u_flag.append(fired)
        cut, fired = _posterior_cut(prod.lmf_cuts[k], ev.lmf_cuts[k], level)
        lmf.append(cut)
        l_flag.append(fired)
    return PosteriorResult(AlphaCutFOU(prod.alphas, umf, lmf), prod, tuple(u_flag), tuple(l_flag))


@dataclass(frozen=True)
class SampledFOU:
    """Upper and lower membership sampled on a common ascending x grid."""

    x: np.ndarray
    umf: np.ndarray
    lmf: np.ndarray


def _level_from_left(x: np.ndarray, edge: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    # largest alpha with edge(alpha) <= x, edge nondecreasing and linear between levels
    k = np.searchsorted(edge, x, side="right") - 1
    out = np.zeros_like(x)
    inside = k >= 0
    top = inside & (k == len(edge) - 1)
    out[top] = alphas[-1]
    mid = inside & ~top
    km = k[mid]
    frac = (x[mid] - edge[km]) / (edge[km + 1] - edge[km])
    out[mid] = alphas[km] + frac * (alphas[km + 1] - alphas[km])
    return out


def curves_from_cuts(cuts: AlphaCutFOU, x: np.ndarray) -> tuple:
    """Evaluate (umf, lmf) at arbitrary points from the cut table."""
    alphas = np.asarray(cuts.alphas)
    out = []
    for seq in (cuts.umf_cuts, cuts.lmf_cuts):
        lo = np.array([iv.lo for iv in seq])
        hi = np.array([iv.hi for iv in seq])
        mu = np.minimum(_level_from_left(x, lo, alphas), _level_from_left(-x, -hi, alphas))
        mu[(x < lo[0]) | (x > hi[0])] = 0.0
        out.append(mu)
    return tuple(out)


def fou_from_cuts(cuts: AlphaCutFOU, grid_points: int = 2001) -> SampledFOU:
    """Sample the membership curves implied by a cut table on a uniform grid
    spanning the bottom UMF cut."""
    if int(grid_points) < 2:
        raise InputError("need at least two grid points")
    base = cuts.umf_cuts[0]
    x = np.linspace(base.lo, base.hi, int(grid_points))
    umf, lmf = curves_from_cuts(cuts, x)
    lmf = np.minimum(lmf, umf)
    return SampledFOU(x, umf, lmf)
