"""Built-in smooth function families for the 1D and 2D summation routines.

A 1D family implements :class:`SmoothFunction1D`: values and derivatives
are mandatory, everything else (closed-form Fourier integrals, monotone
partitions, integrals of |f^(k)|, tail bounds) is optional and signalled by
returning ``None``.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import hermite as H
from numpy.polynomial import polynomial as P

from . import kernels
from .errors import MissingDerivativeError


def _out(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


class SmoothFunction1D:
    """Base class; subclasses override :meth:`derivative` and optional hooks."""

    #: highest derivative order available (None for unbounded)
    max_order = None
    #: f and all its derivatives vanish as x -> +inf
    decays = False

    def value(self, x):
        return self.derivative(0, x)

    def __call__(self, x):
        return self.value(x)

    def derivative(self, order, x):
        raise MissingDerivativeError(f"{type(self).__name__} supplies no derivative of order {order}")

    def _check_order(self, order):
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if self.max_order is not None and order > self.max_order:
            raise MissingDerivativeError(
                f"{type(self).__name__} supplies derivatives up to order {self.max_order}, not {order}"
            )

    def limit(self, order):
        """Limit of f^(order) at +inf; only meaningful when ``decays``."""
        if not self.decays:
            raise ValueError(f"{type(self).__name__} has no vanishing limit at +inf")
        return 0.0

    def fourier_integral(self, k, a, b):
        """Closed form of int_a^b f(x) e^{i 2 pi k x} dx, or None."""
        return None

    def monotone_partition(self, order, a, b):
        """Sorted points in (a, b) where f^(order) changes monotonicity, or None."""
        return None

    def abs_derivative_integral(self, order, a, b):
        """int_a^b |f^(order)| in closed form, or None."""
        return None

    def tail_bound(self, x, order=0):
        """Upper bound on int_x^inf |f^(order)|, or None."""
        return None


class Gaussian(SmoothFunction1D):
    """f(x) = exp(-B x^2)."""

    decays = True
    max_order = kernels.HERMITE_MAX_ORDER

    def __init__(self, B=1.0):
        if not B > 0:
            raise ValueError(f"B must be positive, got {B}")
        self.B = float(B)
        self._rb = math.sqrt(self.B)

    def __repr__(self):
        return f"Gaussian(B={self.B!r})"

    def derivative(self, order, x):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        scale = (-1) ** order * self.B ** (order / 2)
        return _out(scale * kernels.hermite_gaussian(order, self._rb * x))

    def _upper_fourier(self, k, t):
        # int_t^inf exp(-B x^2 + 2 pi i k x) dx
        if t == math.inf:
            return 0j
        if t == -math.inf:
            return math.sqrt(math.pi / self.B) * math.exp(-(math.pi * k) ** 2 / self.B) + 0j
        z = complex(self._rb * t, -math.pi * k / self._rb)
        lp = -(math.pi * k) ** 2 / self.B
        return 0.5 * math.sqrt(math.pi / self.B) * kernels.scaled_erfc_complex(z, lp)

    def fourier_integral(self, k, a, b):
        return self._upper_fourier(k, a) - self._upper_fourier(k, b)

    def _hermite_roots(self, deg):
        if deg == 0:
            return np.array([])
        return np.sort(H.hermroots([0] * deg + [1]).real) / self._rb

    def monotone_partition(self, order, a, b):
        r = self._hermite_roots(order + 1)
        return [float(v) for v in r if a < v < b]

    def abs_derivative_integral(self, order, a, b):
        if order == 0:
            c = 0.5 * math.sqrt(math.pi / self.B)
            lo = kernels.erfc_real(self._rb * a) if a > -math.inf else 2.0
            hi = kernels.erfc_real(self._rb * b) if b < math.inf else 0.0
            return c * (lo - hi)
        self._check_order(order)
        pts = [a] + [float(v) for v in self._hermite_roots(order) if a < v < b] + [b]

        def prim(t):
            return 0.0 if math.isinf(t) else self.derivative(order - 1, t)

        return math.fsum(abs(prim(r) - prim(l)) for l, r in zip(pts[:-1], pts[1:]))

    def tail_bound(self, x, order=0):
        return self.abs_derivative_integral(order, x, math.inf)


class RationalDecay(SmoothFunction1D):
    """f(x) = (1 + x^2)^(-s)."""

    decays = True

    def __init__(self, s=1.0):
        if not s > 0.5:
            raise ValueError("s must exceed 1/2 for integrability")
        self.s = float(s)

    def __repr__(self):
        return f"RationalDecay(s={self.s!r})"

    def derivative(self, order, x):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        # Taylor coefficients of (c0 + c1 t + t^2)^alpha about t = 0
        alpha = -self.s
        c = [1.0 + x * x, 2.0 * x, np.ones_like(x)]
        v = [c[0] ** alpha]
        for j in range(1, order + 1):
            acc = np.zeros_like(x)
            for i in (1, 2):
                if i <= j:
                    acc = acc + ((alpha + 1) * i - j) * c[i] * v[j - i]
            v.append(acc / (j * c[0]))
        return _out(math.factorial(order) * v[order])

    def tail_bound(self, x, order=0):
        # Cauchy estimate on a disc of radius sqrt(1+x^2)/2 around x
        if x <= 0:
            return None
        e = 2 * self.s + order - 1
        return math.factorial(order) * 2.0 ** order * 4.0 ** self.s * x ** (-e) / e


class ExpCos(SmoothFunction1D):
    """f(x) = exp(-lam x) cos(omega x)."""

    decays = True

    def __init__(self, lam=1.0, omega=1.0):
        if not lam > 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)
        self.omega = float(omega)
        self._c = complex(-self.lam, self.omega)

    def __repr__(self):
        return f"ExpCos(lam={self.lam!r}, omega={self.omega!r})"

    def derivative(self, order, x):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        return _out(np.real(self._c ** order * np.exp(self._c * x)))

    def fourier_integral(self, k, a, b):
        total = 0j
        for sgn in (1, -1):
            c = complex(-self.lam, sgn * self.omega + 2 * math.pi * k)
            top = 0j if b == math.inf else np.exp(c * b)
            total += 0.5 * (top - np.exp(c * a)) / c
        return complex(total)

    def monotone_partition(self, order, a, b):
        if math.isinf(b) or self.omega == 0:
            return None if self.omega else []
        # f^(order+1) = |c|^(order+1) e^{-lam x} cos(omega x + (order+1) arg c)
        phase = (order + 1) * math.atan2(self._c.imag, self._c.real)
        w = abs(self.omega)
        ph = phase if self.omega > 0 else -phase
        j0 = math.ceil((w * a + ph - math.pi / 2) / math.pi)
        out = []
        j = j0
        while True:
            t = (math.pi / 2 + j * math.pi - ph) / w
            if t >= b:
                break
            if t > a:
                out.append(t)
            j += 1
        return out

    def tail_bound(self, x, order=0):
        return abs(self._c) ** order * math.exp(-self.lam * x) / self.lam


class Polynomial(SmoothFunction1D):
    """Polynomial with coefficients in increasing degree."""

    def __init__(self, coeffs):
        self.coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1)

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"

    def _deriv_coeffs(self, order):
        c = self.coeffs
        return P.polyder(c, order) if order else c

    def derivative(self, order, x):
        self._check_order(order)
        x = np.asarray(x, dtype=float)
        c = self._deriv_coeffs(order)
        return _out(P.polyval(x, c) if c.size else np.zeros_like(x))

    def _roots_in(self, c, a, b):
        c = np.trim_zeros(c, "b")
        if c.size <= 1:
            return []
        r = P.polyroots(c)
        r = r[np.abs(r.imag) < 1e-12].real
        return sorted(float(v) for v in r if a < v < b)

    def monotone_partition(self, order, a, b):
        return self._roots_in(self._deriv_coeffs(order + 1), a, b)

    def abs_derivative_integral(self, order, a, b):
        if math.isinf(a) or math.isinf(b):
            return None
        c = self._deriv_coeffs(order)
        prim = P.polyint(c)
        pts = [a] + self._roots_in(c, a, b) + [b]
        return math.fsum(abs(P.polyval(r, prim) - P.polyval(l, prim)) for l, r in zip(pts[:-1], pts[1:]))

    def fourier_integral(self, k, a, b):
        if math.isinf(a) or math.isinf(b):
            return None
        # repeated integration by parts: int p e^{iwx} = e^{iwx} sum_j (-1)^j p^(j) / (iw)^{j+1}
        if k == 0:
            prim = P.polyint(self.coeffs)
            return complex(P.polyval(b, prim) - P.polyval(a, prim))
        iw = 2j * math.pi * k

        def anti(t):
            acc = 0j
            for j in range(self.coeffs.size):
                acc += (-1) ** j * P.polyval(t, self._deriv_coeffs(j)) / iw ** (j + 1)
            return np.exp(iw * t) * acc

        return complex(anti(b) - anti(a))


def constant(c):
    return Polynomial([c])


# --------------------------------------------------------------------------
# 2D
# --------------------------------------------------------------------------

class SmoothFunction2D:
    """Base class for f(x, y) exposing partials f_{mu,nu}."""

    def value(self, x, y):
        return self.partial(0, 0, x, y)

    def __call__(self, x, y):
        return self.value(x, y)

    def partial(self, mu, nu, x, y):
        raise MissingDerivativeError(f"{type(self).__name__} supplies no partial ({mu}, {nu})")

    @property
    def factors(self):
        """(g, h) when f(x, y) = g(x) h(y), else None."""
        return None


class Product2D(SmoothFunction2D):
    """Separable f(x, y) = g(x) h(y)."""

    def __init__(self, g, h):
        self.g = g
        self.h = h

    def __repr__(self):
        return f"Product2D({self.g!r}, {self.h!r})"

    def partial(self, mu, nu, x, y):
        return _out(np.asarray(self.g.derivative(mu, x)) * np.asarray(self.h.derivative(nu, y)))

    @property
    def factors(self):
        return self.g, self.h


class Ridge2D(SmoothFunction2D):
    """Non-separable f(x, y) = g(alpha x + beta y)."""

    def __init__(self, g, alpha=1.0, beta=1.0):
        self.g = g
        self.alpha = float(alpha)
        self.beta = float(beta)

    def __repr__(self):
        return f"Ridge2D({self.g!r}, alpha={self.alpha!r}, beta={self.beta!r})"

    def partial(self, mu, nu, x, y):
        t = self.alpha * np.asarray(x, dtype=float) + self.beta * np.asarray(y, dtype=float)
        return _out(self.alpha ** mu * self.beta ** nu * np.asarray(self.g.derivative(mu + nu, t)))


def gaussian_2d(B=1.0):
    """exp(-B (x^2 + y^2)) as a separable product."""
    return Product2D(Gaussian(B), Gaussian(B))


def constant_2d(c=1.0):
    return Product2D(constant(c), constant(1.0))
