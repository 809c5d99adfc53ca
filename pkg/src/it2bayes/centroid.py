"""Type reduction of a sampled FOU to its centroid interval (enhanced Karnik-Mendel)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, InputError


@dataclass(frozen=True)
class CentroidResult:
    c_l: float
    c_r: float

    @property
    def midpoint(self) -> float:
        return (self.c_l + self.c_r) / 2

    def as_dict(self) -> dict:
        return {"c_l": self.c_l, "c_r": self.c_r, "midpoint": self.midpoint}


def switch_centroid(x, upper, lower, k: int, upper_first: bool) -> float:
    """Centroid of the embedded type-1 set that switches between the upper and
    lower curve after the first ``k`` samples. NaN when its total weight is zero."""
    if upper_first:
        theta = np.concatenate([upper[:k], lower[k:]])
    else:
        theta = np.concatenate([lower[:k], upper[k:]])
    den = math.fsum(theta)
    if den == 0:
        return math.nan
    return math.fsum(x * theta) / den


def _validate(x, upper, lower) -> tuple:
    x = np.asarray(x, dtype=float)
    upper = np.asarray(upper, dtype=float)
    lower = np.asarray(lower, dtype=float)
    if x.ndim != 1 or x.shape != upper.shape or x.shape != lower.shape or x.size == 0:
        raise InputError("x, upper and lower must be equal-length 1-d arrays")
    if np.any(np.diff(x) < 0):
        raise InputError("x grid must be ascending")
    if np.any(lower < 0) or np.any(upper < lower):
        raise InputError("need upper >= lower >= 0 at every sample")
    if not np.any(upper > 0):
        raise ComputationError("upper membership is identically zero")
    return x, upper, lower


def _exhaustive(x, upper, lower, upper_first: bool, pick) -> float:
    vals = [switch_centroid(x, upper, lower, k, upper_first) for k in range(x.size + 1)]
    finite = [v for v in vals if not math.isnan(v)]
    return pick(finite)


def _ekm_endpoint(x, upper, lower, upper_first: bool, k=None) -> float:
    n = x.size
    pick = min if upper_first else max
    if k is None:
        k = int(n / 2.4) if upper_first else int(n / 1.7)
    elif not 0 <= k <= n:
        raise InputError(f"initial switch point {k} outside [0, {n}]")
    sign = 1.0 if upper_first else -1.0
    theta = np.concatenate([upper[:k], lower[k:]] if upper_first else [lower[:k], upper[k:]])
    a = math.fsum(x * theta)
    b = math.fsum(theta)
    if b == 0:
        return _exhaustive(x, upper, lower, upper_first, pick)
    y = a / b
    spread = upper - lower
    # the switch point moves monotonically, so n + 1 steps always suffice
    for _ in range(n + 1):
        k_new = min(max(int(np.searchsorted(x, y, side="right")), 1), max(n - 1, 1))
        if k_new == k:
            break
        lo, hi = sorted((k, k_new))
        s = sign * (1.0 if k_new > k else -1.0)
        a += s * math.fsum(x[lo:hi] * spread[lo:hi])
        b += s * math.fsum(spread[lo:hi])
        if b <= 0:
            return _exhaustive(x, upper, lower, upper_first, pick)
        y = a / b
        k = k_new
    else:
        return _exhaustive(x, upper, lower, upper_first, pick)

    # re-evaluate from scratch around the converged switch point; the
    # incremental sums drift by a few ulps and neighbours can tie
    candidates = [switch_centroid(x, upper, lower, j, upper_first)
                  for j in range(max(k - 1, 0), min(k + 1, n) + 1)]
    return pick(v for v in candidates if not math.isnan(v))


def ekm_centroid(x, upper, lower, init=(None, None)) -> CentroidResult:
    """Centroid interval of the FOU bounded by ``upper`` and ``lower`` on grid ``x``.

    ``init`` optionally overrides the starting switch points for the left
    and right endpoints (defaults ``n // 2.4`` and ``n // 1.7``).
    """
    x, upper, lower = _validate(x, upper, lower)
    if x[0] == x[-1]:
        return CentroidResult(float(x[0]), float(x[0]))
    c_l = _ekm_endpoint(x, upper, lower, True, init[0])
    c_r = _ekm_endpoint(x, upper, lower, False, init[1])
    return CentroidResult(c_l, c_r)


def centroid_of(fou, grid_points: int | None = None) -> CentroidResult:
    """Centroid of a sampled FOU, optionally resampled on ``grid_points``
    uniform points over the UMF support."""
    x, upper, lower = fou.x, fou.umf, fou.lmf
    if grid_points is not None and int(grid_points) != len(x):
        if int(grid_points) < 2:
            raise InputError("need at least two grid points")
        nz = np.nonzero(np.asarray(upper) > 0)[0]
        if nz.size == 0:
            raise ComputationError("upper membership is identically zero")
        grid = np.linspace(x[nz[0]], x[nz[-1]], int(grid_points))
        upper, lower = np.interp(grid, x, upper), np.interp(grid, x, lower)
        x = grid
    return ekm_centroid(x, upper, lower)
