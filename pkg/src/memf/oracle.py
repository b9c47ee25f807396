"""Brute-force reference sums.

Nothing here imports the summation or special-function modules of this
package; the reference values must stay independent of the code they check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MajorantError, TruncationError

TAIL_RTOL = 1e-15
MAX_TERMS = 10_000_000


@dataclass(frozen=True)
class TruncationCertificate:
    terms_used: int
    tail_bound: float
    value: float


def _as_float(v):
    return float(v)


def direct_sum_1d(f, a, b, order="ascending"):
    """sum_{i=a}^{b} f(i), adding terms in order of magnitude."""
    if b < a:
        raise ValueError(f"empty range: b={b} < a={a}")
    terms = [_as_float(f(i)) for i in range(int(a), int(b) + 1)]
    terms.sort(key=abs, reverse=(order == "descending"))
    return math.fsum(terms)


def direct_sum_1d_infinite(f, a, majorant, rtol=TAIL_RTOL, max_terms=MAX_TERMS):
    """sum_{i>=a} f(i) truncated once ``majorant(N) >= sum_{i>=N} |f(i)|`` is negligible.

    Every visited term is checked against the majorant (which must dominate
    it, since it bounds a tail that contains it).
    """
    terms = []
    i = int(a)
    while True:
        t = _as_float(f(i))
        bound_here = majorant(i)
        if abs(t) > bound_here * (1 + 1e-12):
            raise MajorantError(f"majorant {bound_here!r} does not dominate term {t!r} at i={i}")
        terms.append(t)
        i += 1
        tail = majorant(i)
        total = math.fsum(terms)
        if tail < rtol * abs(total) and abs(t) < 1e-18 * abs(total) + 1e-300:
            break
        if len(terms) >= max_terms:
            raise TruncationError(f"tail bound still {tail!r} after {max_terms} terms")
    terms.sort(key=abs)
    return TruncationCertificate(terms_used=len(terms), tail_bound=tail, value=math.fsum(terms))


def direct_sum_2d(f, P):
    terms = [_as_float(f(i, j)) for i, j in P]
    terms.sort(key=abs)
    return math.fsum(terms)


# --------------------------------------------------------------------------
# Reference partition functions
# --------------------------------------------------------------------------

def gaussian_majorant(B):
    """Tail bound for sum_{l>=N} exp(-B l^2), N >= 0, by ratio comparison."""

    def tail(N):
        N = max(N, 0)
        q = math.exp(-B * (2 * N + 1))
        return math.exp(-B * N * N) / (1.0 - q)

    return tail


def rotator_majorant(Bc):
    """Tail bound for sum_{l>=N} (2l+1) exp(-Bc l(l+1)); inf while the ratio is not < 1."""

    def tail(N):
        q = (2 * N + 3) / (2 * N + 1) * math.exp(-2 * Bc * (N + 1))
        if q >= 1.0:
            return math.inf
        return (2 * N + 1) * math.exp(-Bc * N * (N + 1)) / (1.0 - q)

    return tail


def well1d_reference(B):
    return direct_sum_1d_infinite(lambda l: math.exp(-B * l * l), 1, gaussian_majorant(B))


def rotator_reference(Bc):
    return direct_sum_1d_infinite(lambda l: (2 * l + 1) * math.exp(-Bc * l * (l + 1)), 0, rotator_majorant(Bc))


def well2d_reference(B):
    """Literal double sum over [1, L]^2, L taken from the 1D certificate."""
    one = well1d_reference(B)
    L = one.terms_used
    e = [math.exp(-B * l * l) for l in range(1, L + 1)]
    value = direct_sum_2d(lambda i, j: e[i - 1] * e[j - 1], [(i, j) for i in range(1, L + 1) for j in range(1, L + 1)])
    # region outside the square: at most 2 * Z1 * tail1
    tail = 2 * one.value * one.tail_bound + one.tail_bound ** 2
    return TruncationCertificate(terms_used=L * L, tail_bound=tail, value=value)
