"""Panel-wise adaptive Gauss-Legendre quadrature for smooth and oscillatory integrands."""

from __future__ import annotations

import math

import numpy as np

from .errors import AccuracyError

_ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(_ORDER)


def _gl(fn, lo, hi):
    """Gauss-Legendre estimate on many panels at once."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(fn(x.ravel()), dtype=float).reshape(x.shape)
    return half * (y @ _WEIGHTS)


def integrate(fn, a, b, panel=1.0, abs_tol=1e-13, max_depth=30, max_panels=200_000):
    """Integrate a vectorized ``fn`` over finite [a, b].

    The interval is first cut into panels of width at most ``panel`` (pass
    a half period for oscillatory integrands); each panel is then bisected
    until the one-level and two-level estimates agree. Returns
    ``(value, error_estimate)``.
    """
    if b == a:
        return 0.0, 0.0
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate needs finite limits")
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    npanel = max(1, int(math.ceil((b - a) / panel - 1e-12)))
    edges = np.linspace(a, b, npanel + 1)
    lo, hi = edges[:-1], edges[1:]
    coarse = _gl(fn, lo, hi)
    total = []
    err_total = 0.0
    width = b - a
    for _depth in range(max_depth):
        mid = 0.5 * (lo + hi)
        left = _gl(fn, lo, mid)
        right = _gl(fn, mid, hi)
        fine = left + right
        err = np.abs(fine - coarse)
        # tolerance shared in proportion to panel width
        ok = err <= abs_tol * (hi - lo) / width + 1e-15 * np.abs(fine)
        total.append(fine[ok])
        err_total += float(err[ok].sum())
        if ok.all():
            break
        bad = ~ok
        if 2 * int(bad.sum()) > max_panels:
            est = math.fsum(np.concatenate(total)) + float(fine[bad].sum())
            raise AccuracyError(
                f"quadrature on [{a}, {b}] needs more than {max_panels} panels",
                estimate=sign * est,
                error=err_total + float(err[bad].sum()),
            )
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    else:
        est = math.fsum(np.concatenate(total)) + float(coarse.sum())
        raise AccuracyError(
            f"quadrature on [{a}, {b}] did not converge after {max_depth} bisections",
            estimate=sign * est,
            error=err_total + float(np.abs(coarse).sum()),
        )
    return sign * math.fsum(np.concatenate(total)), err_total
