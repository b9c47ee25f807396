"""Special-function primitives shared by the summation and partition modules.

Bernoulli numbers, zeta tails ``T_{s,p}``, the grating (Dirichlet) kernel,
periodic Bernoulli polynomials, Gaussian-weighted Hermite polynomials with
their envelopes, and real/complex complementary error functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import NonFiniteResultError, OrderOutOfRangeError

BERNOULLI_MAX_ORDER = 64
HERMITE_MAX_ORDER = 40
# Terms summed explicitly before the Euler-Maclaurin tail correction.
ZETA_DIRECT_TERMS = 10_000

_LN2 = math.log(2.0)
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class TailCoefficient:
    s: int
    p: int
    value: float


@dataclass(frozen=True)
class HermiteEnvelope:
    n: int
    x_n: float
    g_peak: float
    G_n: float


# --------------------------------------------------------------------------
# Bernoulli numbers and zeta tails
# --------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _bernoulli_table():
    """Exact B_0 .. B_{2*BERNOULLI_MAX_ORDER} (convention B_1 = -1/2)."""
    size = 2 * BERNOULLI_MAX_ORDER + 1
    # Akiyama-Tanigawa gives B_1 = +1/2; flipped below.
    a = [Fraction(0)] * (size + 1)
    out = []
    for m in range(size):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = -out[1]
    return tuple(out)


def bernoulli_exact(k):
    """Exact Bernoulli number B_k as a Fraction, 0 <= k <= 2*BERNOULLI_MAX_ORDER."""
    if k < 0 or k > 2 * BERNOULLI_MAX_ORDER:
        raise OrderOutOfRangeError(f"Bernoulli index {k} outside [0, {2 * BERNOULLI_MAX_ORDER}]")
    return _bernoulli_table()[k]


def bernoulli_number(r, max_order=BERNOULLI_MAX_ORDER):
    """Return B_{2r} as a float.

    Raises
    ------
    OrderOutOfRangeError
        If ``r < 1`` or ``r > max_order``.
    """
    if r < 1 or r > max_order or r > BERNOULLI_MAX_ORDER:
        raise OrderOutOfRangeError(f"r={r} outside [1, {min(max_order, BERNOULLI_MAX_ORDER)}]")
    return float(_bernoulli_table()[2 * r])


@lru_cache(maxsize=4096)
def _power_tail(s, p):
    """sum_{k>p} k^{-s}, summed from the tail side."""
    big_k = p + ZETA_DIRECT_TERMS
    k = np.arange(big_k, p, -1, dtype=float)
    direct = math.fsum(k ** (-float(s)))
    # Euler-Maclaurin for sum_{k>K} k^{-s}:
    #   int_K^inf - K^{-s}/2 + sum_j B_{2j}/(2j)! (s)_{2j-1} K^{-s-2j+1}
    K = float(big_k)
    corr = [K ** (1 - s) / (s - 1), -0.5 * K ** (-s)]
    rising = float(s)  # (s)_1
    for j in range(1, 5):
        q = 2 * j - 1
        if j > 1:
            rising *= (s + q - 2) * (s + q - 1)
        coeff = float(_bernoulli_table()[2 * j]) / math.factorial(2 * j)
        corr.append(coeff * rising * K ** (-s - q))
    return math.fsum([direct, math.fsum(corr)])


def zeta_tail(s, p):
    """T_{s,p} = 2 (2 pi)^{-s} sum_{k>p} k^{-s}.

    The tail is summed directly (never as zeta minus a partial sum), so the
    relative accuracy holds at large ``p``.
    """
    if s < 2:
        raise OrderOutOfRangeError(f"zeta tail diverges for s={s} < 2")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    s = int(s)
    p = int(p)
    value = 2.0 * _power_tail(s, p) * math.exp(-s * math.log(2 * math.pi))
    return TailCoefficient(s, p, value)


@lru_cache(maxsize=4096)
def tail(s, p):
    """Float shortcut for ``zeta_tail(s, p).value``."""
    return zeta_tail(s, p).value


def zeta(s):
    """Riemann zeta at an integer s >= 2, via the same tail machinery."""
    if s < 2:
        raise OrderOutOfRangeError(f"zeta({s}) not supported")
    return _power_tail(int(s), 0)


# --------------------------------------------------------------------------
# Kernels
# --------------------------------------------------------------------------

def grating_kernel(p, x):
    """sin((2p+1) pi x) / sin(pi x), equal to 2p+1 at integer x.

    Accepts scalars or arrays. The kernel is 1-periodic, so the argument is
    reduced to [-1/2, 1/2] before evaluation.
    """
    x = np.asarray(x, dtype=float)
    t = x - np.rint(x)
    den = np.sin(np.pi * t)
    small = np.abs(t) < 1e-8
    safe = np.where(small, 1.0, den)
    val = np.sin((2 * p + 1) * np.pi * t) / safe
    # near integers: ratio expanded to second order
    near = (2 * p + 1) * (1 - (np.pi * t) ** 2 * ((2 * p + 1) ** 2 - 1) / 6)
    out = np.where(small, near, val)
    return float(out) if out.ndim == 0 else out


def periodic_bernoulli(n, x):
    """P_n(x) = B_n(x - floor(x)); P_1 is 0 at integers."""
    if n < 1:
        raise OrderOutOfRangeError(f"n must be >= 1, got {n}")
    x = np.asarray(x, dtype=float)
    t = x - np.floor(x)
    coeffs = [math.comb(n, k) * float(bernoulli_exact(k)) for k in range(n + 1)]
    # B_n(t) = sum_k C(n,k) B_k t^{n-k}; Horner in t
    acc = np.zeros_like(t)
    for c in coeffs:
        acc = acc * t + c
    if n == 1:
        acc = np.where(t == 0.0, 0.0, acc)
    return float(acc) if acc.ndim == 0 else acc


def hermite_gaussian(n, x, max_order=HERMITE_MAX_ORDER):
    """H_n(x) exp(-x^2) with physicists' Hermite polynomials.

    The three-term recurrence runs on a mantissa with a separately tracked
    binary exponent, so H_n(x) itself may exceed the double range as long as
    the Gaussian-weighted product does not.
    """
    if n < 0 or n > max_order:
        raise OrderOutOfRangeError(f"Hermite order {n} outside [0, {max_order}] (overflow risk)")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    expo = np.zeros(x.shape, dtype=np.int64)
    for k in range(n):
        nxt = 2.0 * x * cur - 2.0 * k * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 2.0 ** 400
        if big.any():
            prev = np.where(big, np.ldexp(prev, -400), prev)
            cur = np.where(big, np.ldexp(cur, -400), cur)
            expo = expo + 400 * big
    x2 = x * x
    direct = (expo == 0) & (x2 < 700.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        out_direct = cur * np.exp(-x2)
        logmag = np.log(np.abs(cur)) + expo * _LN2 - x2
        out_log = np.sign(cur) * np.exp(logmag)
    out = np.where(direct, out_direct, np.where(cur == 0.0, 0.0, out_log))
    return float(out[0]) if scalar else out


def hermite_scale(n):
    """2^n Gamma((n+1)/2) / sqrt(pi), the global bound of |H_n(x) e^{-x^2}|."""
    return math.exp(n * _LN2 + math.lgamma((n + 1) / 2)) / _SQRT_PI


def turning_point(n):
    return math.sqrt(2 * n + 1) * (1 - math.pi / (2 * (2 * n + 1)))


def g_envelope(n, x):
    """g_n(x) = (1 - x^2/(2n+1))^{-1/2}, defined for |x| < sqrt(2n+1)."""
    x = np.asarray(x, dtype=float)
    out = 1.0 / np.sqrt(1.0 - x * x / (2 * n + 1))
    return float(out) if out.ndim == 0 else out


def envelope_G(n):
    """Closed form of G_n."""
    return (
        math.exp((n + 1) * _LN2 + math.lgamma((n + 1) / 2))
        * (2 * n + 1)
        / (math.pi * math.sqrt(4 * (2 * n + 1) - math.pi))
    )


def envelope(n):
    if n < 1:
        raise OrderOutOfRangeError(f"envelope needs n >= 1, got {n}")
    x_n = turning_point(n)
    return HermiteEnvelope(n=n, x_n=x_n, g_peak=g_envelope(n, x_n), G_n=envelope_G(n))


def hermite_conjecture_bound(n, x):
    """Right-hand side of the conjectured envelope for |H_n(x) e^{-x^2}|, x >= 0."""
    x = np.asarray(x, dtype=float)
    xc = np.minimum(x, turning_point(n))
    return hermite_scale(n) * g_envelope(n, xc) * np.exp(-x * x / 2)


# --------------------------------------------------------------------------
# Error functions
# --------------------------------------------------------------------------

def erfc_real(x):
    """Complementary error function of a real argument."""
    out = special.erfc(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def _exponent(log_prefactor, z):
    """log_prefactor - z^2, with log_prefactor + Im(z)^2 formed exactly.

    Callers typically pass log_prefactor = -Im(z)^2 + O(1); summing the two
    large terms in floating point would cost their magnitude times eps.
    """
    re = float(Fraction(log_prefactor) + Fraction(z.imag) ** 2 - Fraction(z.real) ** 2)
    return complex(re, -2.0 * z.real * z.imag)


def scaled_erfc_complex(z, log_prefactor=0.0):
    """exp(log_prefactor) * erfc(z), through the Faddeeva function.

    erfc(z) = exp(-z^2) w(iz) for Re z >= 0; the left half plane uses
    erfc(z) = 2 - erfc(-z). The exponential factors are merged before
    exponentiation so neither e^{-z^2} nor the prefactor overflows alone.
    """
    z = complex(z)
    with np.errstate(over="ignore", invalid="ignore"):
        if z.real >= 0.0:
            out = np.exp(_exponent(log_prefactor, z)) * special.wofz(1j * z)
        else:
            out = 2.0 * math.exp(log_prefactor) - np.exp(_exponent(log_prefactor, z)) * special.wofz(-1j * z)
    out = complex(out)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise NonFiniteResultError(f"exp({log_prefactor}) * erfc({z}) is not representable")
    return out


def faddeeva(z):
    """w(z) = exp(-z^2) erfc(-iz)."""
    return complex(special.wofz(complex(z)))


_CF_THRESHOLD = 8.0


def faddeeva_defect(u, terms=160):
    """1 + i sqrt(pi) u w(u) for Im u >= 0.

    For large |u| the two terms cancel to O(u^-2); there the Laplace
    continued fraction of w is used so the small result keeps full relative
    accuracy.
    """
    u = complex(u)
    if u.imag < 0:
        raise ValueError("faddeeva_defect needs Im(u) >= 0")
    if abs(u) <= _CF_THRESHOLD:
        return complex(1.0 + 1j * _SQRT_PI * u * special.wofz(u))
    # w(u) = (i/sqrt(pi)) / (u - (1/2)/(u - 1/(u - (3/2)/(u - ...))))
    inner = u
    for j in range(terms, 1, -1):
        inner = u - (j / 2) / inner
    shift = -0.5 / inner
    return shift / (u + shift)
