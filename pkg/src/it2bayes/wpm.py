"""Weighted power mean with overflow-safe evaluation for large magnitudes."""

import math

import numpy as np

from .errors import InputError


def wpm(x, w=None, r=1.0) -> float:
    """Weighted power mean of nonnegative values ``x`` with exponent ``r``.

    ``r`` may be any extended real. Special values: ``-inf`` -> min,
    ``-1`` -> harmonic, ``0`` -> geometric, ``1`` -> arithmetic,
    ``2`` -> RMS, ``+inf`` -> max. The result is nondecreasing in ``r``.

    For finite nonzero ``r`` the values are normalized by their largest
    element (smallest when ``r < 0``) and averaged in the log domain, so
    inputs of order 1e6 raised to large powers never overflow.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise InputError("wpm needs at least one value")
    w = np.ones_like(x) if w is None else np.asarray(w, dtype=float).ravel()
    if w.shape != x.shape:
        raise InputError(f"values and weights differ in length ({x.size} vs {w.size})")
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InputError("wpm values must be finite and nonnegative")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise InputError("wpm weights must be finite and positive")
    r = float(r)
    if math.isnan(r):
        raise InputError("wpm exponent is NaN")

    if r == math.inf:
        return float(x.max())
    if r == -math.inf:
        return float(x.min())
    if r <= 0 and np.any(x == 0):
        return 0.0
    total = math.fsum(w)
    if r == 1:
        value = math.fsum(w * x) / total
    elif r == 0:
        value = math.exp(math.fsum(w * np.log(x)) / total)
    else:
        scale = float(x.max()) if r > 0 else float(x.min())
        if scale == 0.0:
            return 0.0
        with np.errstate(divide="ignore", over="ignore"):
            # (x/scale)**r - 1, exact near r = 0 and bounded in [-1, 0]
            shifted = np.expm1(r * np.log(x / scale))
        value = scale * math.exp(math.log1p(math.fsum(w * shifted) / total) / r)
    # a power mean lies between min and max; clamp away rounding excursions
    return min(max(value, float(x.min())), float(x.max()))
