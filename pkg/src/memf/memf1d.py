"""One-dimensional modified Euler-Maclaurin summation.

An ``m-n-p`` cut sums the first ``m`` terms explicitly, integrates ``f``
against the grating kernel ``sin((2p+1) pi x)/sin(pi x)``, adds the
endpoint average and derivative corrections weighted by zeta tails
``T_{2r,p}``. ``p = 0`` recovers classical Euler-Maclaurin; ``n = 1`` with
large ``p`` recovers Poisson summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import kernels
from .errors import AccuracyError, InvalidPartitionError, MissingDerivativeError, MonotonicityError
from .quadrature import integrate

TAIL_RTOL = 1e-16
MODE_ABS_TOL = 1e-12


@dataclass(frozen=True)
class CutParams:
    m: int = 0
    n: int = 2
    p: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 1 or self.p < 0:
            raise ValueError(f"invalid cut {self}")

    @property
    def n_half(self):
        return self.n // 2


@dataclass(frozen=True)
class BoundReport:
    kind: str  # A, B, C, piecewise_A, H_conjecture
    value: float
    assumptions: tuple = ()

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"bound must be non-negative, got {self.value}")


@dataclass
class SummationEstimate:
    head: float
    grating_term: float
    endpoint_term: float
    correction_term: float
    bounds: list = field(default_factory=list)

    @property
    def total(self):
        return self.head + self.grating_term + self.endpoint_term + self.correction_term

    def best_bound(self):
        """Smallest attached bound, or None."""
        return min(self.bounds, key=lambda b: b.value) if self.bounds else None


def _derivative(f, order, x):
    try:
        return float(f.derivative(order, x))
    except MissingDerivativeError:
        raise
    except (NotImplementedError, AttributeError) as exc:  # pragma: no cover - defensive
        raise MissingDerivativeError(str(exc)) from exc


def _at(f, order, x):
    """f^(order)(x), with x = +inf mapped to the decay limit."""
    if x == math.inf:
        return f.limit(order)
    return _derivative(f, order, x)


def endpoint_difference(f, nu, a1, b, limit=None):
    """M_nu(a', b) = f^(nu)(a') - f^(nu)(b).

    For ``b = inf`` the b-term is ``limit`` if given, else the function's
    decay limit (0).
    """
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if a1 == b:
        return 0.0
    if b == math.inf:
        tail = f.limit(nu) if limit is None else limit
        return _derivative(f, nu, a1) - tail
    return _derivative(f, nu, a1) - _derivative(f, nu, b)


def _cutoff(f, a1, scale, order=0, factor=1.0, rtol=TAIL_RTOL):
    """Point X beyond which factor * int_X^inf |f^(order)| <= rtol * scale."""
    if not f.decays:
        raise ValueError(f"{f!r} is not declared decaying; cannot integrate to +inf")
    target = rtol * max(abs(scale), 1e-300)
    step = 1.0
    for _ in range(60):
        x = a1 + step
        tb = f.tail_bound(x, order) if x > 0 else None
        if tb is not None and factor * tb <= target:
            return x, factor * tb
        step *= 2.0
    raise AccuracyError(f"no tail cutoff found for {f!r} from {a1}")


def _mode_by_quadrature(f, k, a1, b):
    """int_{a1}^{b} f(x) cos(2 pi k x) dx on finite limits."""
    if k == 0:
        return integrate(lambda x: f.derivative(0, x), a1, b, panel=1.0, abs_tol=MODE_ABS_TOL)
    w = 2 * math.pi * k
    return integrate(lambda x: f.derivative(0, x) * np.cos(w * x), a1, b, panel=0.5 / k, abs_tol=MODE_ABS_TOL)


def grating_integral(f, a1, b, p):
    """int_{a'}^{b} f(x) sin((2p+1) pi x)/sin(pi x) dx as a sum of Fourier modes.

    Closed-form ``fourier_integral`` is used when the function provides it;
    otherwise each mode is integrated by panel quadrature with panels of a
    half period. Modes k and -k are combined into 2 Re, so the result is real.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    if b == a1:
        return 0.0
    probe = f.fourier_integral(0, a1, b)
    if probe is not None:
        terms = [probe.real]
        terms += [2.0 * f.fourier_integral(k, a1, b).real for k in range(1, p + 1)]
        return math.fsum(terms)

    if b == math.inf:
        return _semi_infinite_grating(f, a1, p)
    terms = []
    for k in range(p + 1):
        val, _err = _mode_by_quadrature(f, k, a1, b)
        terms.append(val if k == 0 else 2.0 * val)
    return math.fsum(terms)


# order of the integration-by-parts expansion used for oscillatory tails
_TAIL_PARTS = 3


def _semi_infinite_grating(f, a1, p):
    """Grating integral to +inf by quadrature.

    [a', X] is integrated by panels. If f is already negligible beyond X the
    tail is dropped; otherwise the k = 0 tail uses the map x = X/t and the
    k >= 1 tails use the by-parts expansion
    int_X^inf f cos(wx) = sum_j (-1)^j f^(2j-1)(X) / w^(2j), whose remainder
    is bounded by int_X^inf |f^(2J)| / w^(2J).
    """
    if not f.decays:
        raise ValueError(f"{f!r} is not declared decaying; cannot integrate to +inf")
    scale, _ = integrate(lambda x: f.derivative(0, x), a1, a1 + 1.0, abs_tol=MODE_ABS_TOL)
    scale = max(abs(scale), abs(_derivative(f, 0, a1)), 1e-300)
    target = TAIL_RTOL * scale
    drop_tail = False
    upper = None
    start = math.floor(a1)
    for j in range(0, 40):
        x = start + 2 ** j
        if x <= 0 or x <= a1:
            continue
        tb0 = f.tail_bound(x, 0)
        if tb0 is not None and (2 * p + 1) * tb0 <= target:
            upper, drop_tail = x, True
            break
        if p == 0:
            continue
        tbj = f.tail_bound(x, 2 * _TAIL_PARTS)
        if tbj is not None and 2 * p * tbj / (2 * math.pi) ** (2 * _TAIL_PARTS) <= target and j >= 4:
            upper = x
            break
    if upper is None:
        if p == 0:
            upper = start + 2 ** 6
        else:
            raise AccuracyError(f"no usable tail split for {f!r} from {a1}")
    terms = []
    for k in range(p + 1):
        val, _err = _mode_by_quadrature(f, k, a1, upper)
        terms.append(val if k == 0 else 2.0 * val)
    if not drop_tail:
        terms.append(_mapped_tail(f, upper))
        for k in range(1, p + 1):
            w = 2 * math.pi * k
            series = [
                (-1) ** jj * _derivative(f, 2 * jj - 1, upper) / w ** (2 * jj)
                for jj in range(1, _TAIL_PARTS + 1)
            ]
            terms.append(2.0 * math.fsum(series))
    return math.fsum(terms)


def _mapped_tail(f, X):
    """int_X^inf f via x = X / t on (0, 1]."""

    def g(t):
        with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
            v = np.asarray(f.derivative(0, X / t), dtype=float) * X / (t * t)
        return np.nan_to_num(v, nan=0.0, posinf=0.0, neginf=0.0)

    val, _ = integrate(g, 0.0, 1.0, panel=0.125, abs_tol=1e-17 * X, max_depth=50)
    return val


def _correction(f, a1, b, n, p, sign=1):
    terms = []
    for r in range(1, n // 2 + 1):
        terms.append((-1) ** r * kernels.tail(2 * r, p) * endpoint_difference(f, 2 * r - 1, a1, b))
    return sign * math.fsum(terms)


# --------------------------------------------------------------------------
# Bounds
# --------------------------------------------------------------------------

def _semi_inf_note(b):
    return ("b = +inf taken as the limit of the finite-interval estimate",) if b == math.inf else ()


def _sign_changes(fn, a, b, step=1.0 / 32):
    """Roots of a vectorized fn on [a, b], located by a grid scan and brentq."""
    npts = max(2, int(math.ceil((b - a) / step)) + 1)
    x = np.linspace(a, b, npts)
    v = np.asarray(fn(x), dtype=float)
    roots = []
    for i in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
        roots.append(optimize.brentq(lambda t: float(fn(t)), x[i], x[i + 1], xtol=1e-14))
    return roots


def _abs_integral(f, order, a1, b):
    closed = f.abs_derivative_integral(order, a1, b)
    if closed is not None:
        return closed, "closed-form integral of |f^(n)|"
    upper, tail = b, 0.0
    scale = abs(_derivative(f, order, a1)) + 1e-300
    if b == math.inf:
        upper, tail = _cutoff(f, a1, scale, order=order, rtol=1e-8)

    def g(x):
        return f.derivative(order, x)

    pts = [a1] + _sign_changes(g, a1, upper) + [upper]
    total, err = [], 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        val, e = integrate(g, lo, hi, panel=0.5, abs_tol=1e-12 * scale)
        total.append(abs(val))
        err += e
    return math.fsum(total) + err + tail, "piecewise quadrature of |f^(n)| (error estimate added)"


def bound_A(f, a1, b, n, p):
    """T_{n,p} * int_{a'}^{b} |f^(n)|."""
    if n < 2:
        raise ValueError("remainder bounds need n > 1")
    integral, how = _abs_integral(f, n, a1, b)
    return BoundReport("A", kernels.tail(n, p) * integral, (how,) + _semi_inf_note(b))


def _monotone_established(f, order, a1, b, monotone):
    if monotone:
        return f"f^({order}) monotone on [a', b] (caller flag)"
    part = f.monotone_partition(order, a1, b)
    if part is not None and len(part) == 0:
        return f"f^({order}) monotone on [a', b] (partition)"
    raise MonotonicityError(f"monotonicity of f^({order}) on [{a1}, {b}] not established")


def bound_B(f, a1, b, n, p, monotone=False):
    """2 T_{n+1,p} |M_n(a', b)| for odd n with f^(n) monotone."""
    if n < 2 or n % 2 == 0:
        raise ValueError("bound B needs odd n > 1")
    note = _monotone_established(f, n, a1, b, monotone)
    value = 2.0 * kernels.tail(n + 1, p) * abs(endpoint_difference(f, n, a1, b))
    return BoundReport("B", value, (note,) + _semi_inf_note(b))


def bound_C(f, a1, b, n, p, monotone=False):
    """T_{n+1,p} |M_n(a', b)| for even n with f^(n) monotone."""
    if n < 2 or n % 2 == 1:
        raise ValueError("bound C needs even n > 1")
    note = _monotone_established(f, n, a1, b, monotone)
    value = kernels.tail(n + 1, p) * abs(endpoint_difference(f, n, a1, b))
    return BoundReport("C", value, (note,) + _semi_inf_note(b))


def _spot_check(f, order, lo, hi, samples=65):
    if math.isinf(hi):
        scale = abs(_derivative(f, order, lo)) + 1e-300
        hi, _ = _cutoff(f, lo, scale, order=order, rtol=1e-8)
    x = np.linspace(lo, hi, samples)
    v = np.asarray(f.derivative(order, x), dtype=float)
    d = np.diff(v)
    tol = 1e-12 * (np.max(np.abs(v)) + 1e-300)
    return bool(np.all(d <= tol) or np.all(d >= -tol))


def bound_piecewise(f, a1, b, n, p, partition=None):
    """T_{n,p} * l_{n-1} * (max - min of f^(n-1) on [a', b]).

    ``partition`` lists the interior breakpoints where f^(n-1) changes
    monotonicity; by default it is taken from ``f.monotone_partition``.
    """
    if n < 2:
        raise ValueError("remainder bounds need n > 1")
    if partition is None:
        partition = f.monotone_partition(n - 1, a1, b)
        if partition is None:
            raise InvalidPartitionError(f"no monotone partition of f^({n - 1}) available")
    pts = [a1] + sorted(float(t) for t in partition) + [b]
    if any(r <= l for l, r in zip(pts[:-1], pts[1:])):
        raise InvalidPartitionError("partition points must lie strictly inside (a', b)")
    for l, r in zip(pts[:-1], pts[1:]):
        if not _spot_check(f, n - 1, l, r):
            raise InvalidPartitionError(f"f^({n - 1}) not monotone on [{l}, {r}]")
    values = [_at(f, n - 1, t) for t in pts]
    pieces = len(pts) - 1
    delta = max(values) - min(values)
    return BoundReport(
        "piecewise_A",
        kernels.tail(n, p) * pieces * delta,
        (f"f^({n - 1}) monotone on {pieces} subintervals",) + _semi_inf_note(b),
    )


def attach_bounds(f, a1, b, n, p, monotone=False):
    """Every bound whose preconditions can be established."""
    if n < 2:
        return []
    out = []
    for attempt in (
        lambda: bound_A(f, a1, b, n, p),
        lambda: (bound_B if n % 2 else bound_C)(f, a1, b, n, p, monotone=monotone),
        lambda: bound_piecewise(f, a1, b, n, p),
    ):
        try:
            out.append(attempt())
        except (MonotonicityError, InvalidPartitionError, MissingDerivativeError, AccuracyError):
            continue
    return out


# --------------------------------------------------------------------------
# Cuts
# --------------------------------------------------------------------------

def _head(f, a, a1):
    if a1 <= a:
        return 0.0
    return math.fsum(float(v) for v in np.atleast_1d(f.derivative(0, np.arange(a, a1, dtype=float))))


def memf_sum_finite(f, a, b, cut, *, monotone=False, with_bounds=True):
    """m-n-p cut of sum_{i=a}^{b} f(i) over a closed integer range."""
    if not a < b:
        raise ValueError("need a < b")
    if cut.m > b - a:
        raise ValueError("cut.m exceeds b - a")
    a1 = a + cut.m
    est = SummationEstimate(
        head=_head(f, a, a1),
        grating_term=grating_integral(f, a1, b, cut.p),
        endpoint_term=0.5 * (_derivative(f, 0, a1) + _derivative(f, 0, b)),
        correction_term=_correction(f, a1, b, cut.n, cut.p),
    )
    if with_bounds:
        est.bounds = attach_bounds(f, a1, b, cut.n, cut.p, monotone=monotone)
    return est


def memf_sum_infinite(f, a, cut, *, monotone=False, with_bounds=True):
    """m-n-p cut of sum_{i=a}^{inf} f(i); f and its derivatives must decay."""
    if not f.decays:
        raise ValueError(f"{f!r} is not declared decaying")
    a1 = a + cut.m
    inf = math.inf
    est = SummationEstimate(
        head=_head(f, a, a1),
        grating_term=grating_integral(f, a1, inf, cut.p),
        endpoint_term=0.5 * (_derivative(f, 0, a1) + f.limit(0)),
        correction_term=_correction(f, a1, inf, cut.n, cut.p),
    )
    if with_bounds:
        est.bounds = attach_bounds(f, a1, inf, cut.n, cut.p, monotone=monotone)
    return est


def memf_sum_halfopen(f, a, b, cut):
    """Cut of sum_{i=a}^{b-1} f(i), the half-open form used by the 2D code.

    Equals the closed cut minus f(b): the endpoint term becomes
    (f(a') - f(b)) / 2.
    """
    if not a < b:
        raise ValueError("need a < b")
    a1 = a + cut.m
    if a1 > b:
        raise ValueError("cut.m exceeds b - a")
    return SummationEstimate(
        head=_head(f, a, a1),
        grating_term=grating_integral(f, a1, b, cut.p),
        endpoint_term=0.5 * (_derivative(f, 0, a1) - _derivative(f, 0, b)),
        correction_term=_correction(f, a1, b, cut.n, cut.p),
    )


def classical_euler_maclaurin(f, a, b, n):
    """Classical Euler-Maclaurin with Bernoulli-number coefficients.

    Kept independent of the zeta-tail path: the integral is a plain
    integral and the coefficients are B_{2r}/(2r)!.
    """
    if not a < b:
        raise ValueError("need a < b")
    integral = None
    closed = f.fourier_integral(0, a, b)
    if closed is not None:
        integral = closed.real
    elif b == math.inf:
        scale = abs(_derivative(f, 0, a)) + 1e-300
        upper, _ = _cutoff(f, a, scale)
        integral, _ = integrate(lambda x: f.derivative(0, x), a, upper, abs_tol=MODE_ABS_TOL)
    else:
        integral, _ = integrate(lambda x: f.derivative(0, x), a, b, abs_tol=MODE_ABS_TOL)
    corr = []
    for r in range(1, n // 2 + 1):
        coeff = kernels.bernoulli_number(r) / math.factorial(2 * r)
        corr.append(-coeff * endpoint_difference(f, 2 * r - 1, a, b))
    return SummationEstimate(
        head=0.0,
        grating_term=integral,
        endpoint_term=0.5 * (_derivative(f, 0, a) + _at(f, 0, b)),
        correction_term=math.fsum(corr),
    )
