import math

import numpy as np
import pytest

from memf import families
from memf.errors import MissingDerivativeError

FAMILIES_1D = [
    families.Gaussian(0.8),
    families.RationalDecay(1.5),
    families.ExpCos(0.4, 2.2),
    families.Polynomial([1.0, -2.0, 0.5, 0.25]),
]


@pytest.mark.parametrize("f", FAMILIES_1D, ids=repr)
def test_value_is_zeroth_derivative(f):
    x = np.linspace(-3, 5, 41)
    assert np.allclose(f.value(x), f.derivative(0, x), rtol=1e-12, atol=0)


@pytest.mark.parametrize("f", FAMILIES_1D, ids=repr)
@pytest.mark.parametrize("nu", [1, 2, 3, 5])
def test_derivatives_match_central_differences(f, nu):
    x = np.linspace(-2.3, 4.1, 17)
    errs = []
    for h in (1e-2, 5e-3):
        fd = (f.derivative(nu - 1, x + h) - f.derivative(nu - 1, x - h)) / (2 * h)
        errs.append(np.max(np.abs(fd - f.derivative(nu, x))))
    # O(h^2): halving h cuts the error about fourfold
    assert errs[1] <= errs[0] / 3 + 1e-9


@pytest.mark.parametrize("f", [families.Gaussian(0.8), families.ExpCos(0.4, 2.2)], ids=repr)
def test_fourier_closed_form(f):
    from scipy.integrate import quad

    for k in (0, 1, 3):
        a, b = 0.3, 4.7
        got = f.fourier_integral(k, a, b)
        re = quad(lambda t: float(f(t)) * math.cos(2 * math.pi * k * t), a, b, limit=200, epsabs=1e-14)[0]
        im = quad(lambda t: float(f(t)) * math.sin(2 * math.pi * k * t), a, b, limit=200, epsabs=1e-14)[0]
        assert abs(got - complex(re, im)) < 1e-12


def test_polynomial_fourier_exact():
    f = families.Polynomial([0, 0, 1])
    assert f.fourier_integral(0, 0, 3).real == pytest.approx(9.0)
    # int_0^1 x^2 e^{2 pi i x} dx = 1/(2 pi^2) + i/(2 pi) ... real part 1/(2 pi^2)
    assert f.fourier_integral(1, 0, 1).real == pytest.approx(1 / (2 * math.pi ** 2), rel=1e-13)


def _abs_hermite_integral(B, order, a, b):
    # split at the exact sign changes so the quadrature never sees a kink
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(40):
        B = mpmath.mpf(B)
        rb = mpmath.sqrt(B)
        roots = []
        if order:
            coeffs = mpmath.taylor(lambda s: mpmath.hermite(order, s), 0, order)[::-1]
            roots = [mpmath.re(r) / rb for r in mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)]
        pts = [mpmath.mpf(a)] + sorted(r for r in roots if a < r < b) + [mpmath.mpf(b)]
        f = lambda t: abs(rb ** order * mpmath.hermite(order, rb * t) * mpmath.exp(-B * t * t))
        return float(mpmath.quad(f, pts))


def test_gaussian_abs_integral():
    g = families.Gaussian(1.3)
    for order in (0, 1, 4, 7):
        closed = g.abs_derivative_integral(order, -0.5, 6.0)
        assert closed == pytest.approx(_abs_hermite_integral(1.3, order, -0.5, 6.0), rel=1e-13)


def test_tail_bounds_dominate():
    from scipy.integrate import quad

    for f in (families.RationalDecay(1.2), families.ExpCos(0.7, 1.0), families.Gaussian(0.5)):
        for order in (0, 2, 3):
            x = 4.0
            num = quad(lambda t: abs(float(f.derivative(order, t))), x, np.inf, limit=500)[0]
            assert f.tail_bound(x, order) >= num * (1 - 1e-8)


def test_max_order():
    with pytest.raises(MissingDerivativeError):
        families.Gaussian(1.0).derivative(41, 0.5)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        families.Gaussian(0.0)
    with pytest.raises(ValueError):
        families.RationalDecay(0.5)
    with pytest.raises(ValueError):
        families.ExpCos(-1.0, 1.0)


def test_2d_partials():
    f = families.Product2D(families.Gaussian(0.5), families.ExpCos(0.2, 1.0))
    x, y, h = 0.7, -0.4, 1e-4
    assert f.partial(0, 0, x, y) == pytest.approx(f.value(x, y), rel=1e-12)
    fd = (f.partial(1, 0, x, y + h) - f.partial(1, 0, x, y - h)) / (2 * h)
    assert f.partial(1, 1, x, y) == pytest.approx(fd, rel=1e-6)
    r = families.Ridge2D(families.Gaussian(0.3), 1.0, 0.5)
    fd = (r.partial(1, 0, x, y + h) - r.partial(1, 0, x, y - h)) / (2 * h)
    assert r.partial(1, 1, x, y) == pytest.approx(fd, rel=1e-6)
    assert r.factors is None
