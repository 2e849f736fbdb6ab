"""Small numerical helpers: sequence extrapolation and output formatting."""

from __future__ import annotations

import numpy as np


def aitken_limit(values, rtol: float = 1e-3) -> tuple[float, bool]:
    """Extrapolate the limit of a convergent sequence via Aitken's delta-squared.

    Returns ``(limit, converged)``.  The sequence is assumed to come from a
    geometric probe grid, so successive differences shrink geometrically when
    the underlying limit exists.  ``converged`` is False when the tail of the
    sequence is still moving relative to the extrapolated value.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        raise ValueError("need at least three sequence values")
    if not np.all(np.isfinite(v)):
        return float("nan"), False
    d1 = v[-1] - v[-2]
    d0 = v[-2] - v[-3]
    den = d1 - d0
    if abs(den) < 1e-300:
        limit = float(v[-1])
    else:
        limit = float(v[-1] - d1 * d1 / den)
    if not np.isfinite(limit):
        return float("nan"), False
    scale = max(abs(limit), 1e-12)
    converged = abs(v[-1] - limit) <= rtol * scale and abs(d1) <= 10.0 * rtol * scale
    return limit, converged


def fmt17(x) -> str:
    """Format a number with 17 significant digits, locale independent."""
    return format(float(x), ".17g")
