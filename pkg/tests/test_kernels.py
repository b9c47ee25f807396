import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memf import kernels
from memf.errors import NonFiniteResultError, OrderOutOfRangeError

T_2_1 = 0.032672741512164447611  # (zeta(2) - 1) / (2 pi^2), mpmath
T_3_0 = 0.0096920449007291997353  # 2 zeta(3) / (2 pi)^3, mpmath
ERFC_1 = 0.15729920705028513066
CERFC_1_MIPI = complex(0.021881361446681783349, 0.061653312125131805187)  # exp(-pi^2) erfc(1 - i pi)


def test_bernoulli_small():
    assert kernels.bernoulli_number(1) == pytest.approx(1 / 6, rel=1e-16)
    assert kernels.bernoulli_number(2) == pytest.approx(-1 / 30, rel=1e-16)
    assert kernels.bernoulli_number(7) == pytest.approx(7 / 6, rel=1e-15)


def test_bernoulli_zeta_identity():
    for r in range(1, 16):
        z = math.fsum(k ** (-2.0 * r) for k in range(1, 200_000)) if r == 1 else kernels.zeta(2 * r)
        via_zeta = 2 * (-1) ** (r + 1) * z * math.factorial(2 * r) / (2 * math.pi) ** (2 * r)
        assert kernels.bernoulli_number(r) == pytest.approx(via_zeta, rel=1e-5 if r == 1 else 1e-13)


def test_bernoulli_range():
    with pytest.raises(OrderOutOfRangeError):
        kernels.bernoulli_number(65)
    with pytest.raises(OrderOutOfRangeError):
        kernels.bernoulli_number(0)


def test_zeta_tail_values():
    assert kernels.zeta_tail(2, 0).value == pytest.approx(1 / 12, rel=1e-15)
    assert kernels.zeta_tail(2, 1).value == pytest.approx(T_2_1, rel=1e-14)
    assert kernels.zeta_tail(3, 0).value == pytest.approx(T_3_0, rel=1e-14)


def test_zeta_tail_rejects_s1():
    with pytest.raises(OrderOutOfRangeError):
        kernels.zeta_tail(1, 0)


def test_zeta_tail_against_mpmath():
    mpmath.mp.dps = 30
    for s in (2, 3, 5, 8, 16):
        for p in (0, 3, 50, 1000):
            want = 2 * mpmath.zeta(s, p + 1) / (2 * mpmath.pi) ** s
            assert kernels.tail(s, p) == pytest.approx(float(want), rel=1e-14)


def test_zeta_tail_telescoping():
    for s in range(2, 17):
        for p in range(0, 51):
            diff = kernels.tail(s, p) - kernels.tail(s, p + 1)
            want = 2.0 / ((2 * math.pi) ** s * (p + 1) ** s)
            assert diff == pytest.approx(want, rel=1e-14 * kernels.tail(s, p) / want + 1e-14)


def test_zeta_tail_monotone():
    for s in range(2, 12):
        vals = [kernels.tail(s, p) for p in range(10)]
        assert all(a > b > 0 for a, b in zip(vals, vals[1:]))
    for p in range(1, 6):
        vals = [kernels.tail(s, p) for s in range(2, 12)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_zeta_tail_bernoulli_at_p0():
    for r in range(1, 10):
        want = abs(kernels.bernoulli_number(r)) / math.factorial(2 * r)
        assert kernels.tail(2 * r, 0) == pytest.approx(want, rel=1e-14)


def test_grating_examples():
    assert kernels.grating_kernel(3, 5.0) == 7
    assert kernels.grating_kernel(1, 0.25) == pytest.approx(1.0, abs=1e-15)
    want = sum(math.cos(2 * math.pi * k * 0.1) for k in range(-2, 3))
    assert kernels.grating_kernel(2, 0.1) == pytest.approx(want, rel=1e-14)


def test_grating_matches_exponential_sum():
    rng = np.random.default_rng(7)
    xs = rng.uniform(-50, 50, 1000)
    ps = rng.integers(0, 21, 1000)
    for x, p in zip(xs, ps):
        s = sum(cmath.exp(2j * math.pi * k * x) for k in range(-p, p + 1))
        assert abs(s.imag) < 1e-12
        assert kernels.grating_kernel(int(p), x) == pytest.approx(s.real, abs=1e-12 * (2 * p + 1))


@given(st.integers(0, 30), st.floats(-1e3, 1e3, allow_nan=False))
def test_grating_bounded(p, x):
    assert abs(kernels.grating_kernel(p, x)) <= 2 * p + 1 + 1e-9


def test_periodic_bernoulli_examples():
    assert kernels.periodic_bernoulli(2, 0.0) == pytest.approx(1 / 6)
    assert kernels.periodic_bernoulli(1, 0.25) == pytest.approx(-0.25)
    assert kernels.periodic_bernoulli(1, 3.0) == 0.0
    assert kernels.periodic_bernoulli(4, 1.3) == pytest.approx(0.010766666666666667, rel=1e-12)


def test_periodic_bernoulli_fourier():
    K = 10 ** 6
    k = np.arange(1, K + 1, dtype=float)
    for n in (2, 3, 4, 5):
        for x in (0.1, 0.37, 1.3, -2.8):
            ang = 2 * math.pi * k * x - n * math.pi / 2
            series = -2 * math.factorial(n) * math.fsum(np.cos(ang) / (2 * math.pi * k) ** n)
            trunc = 2 * math.factorial(n) / ((2 * math.pi) ** n * (n - 1) * K ** (n - 1))
            assert abs(kernels.periodic_bernoulli(n, x) - series) <= trunc + 1e-14


def test_hermite_examples():
    assert kernels.hermite_gaussian(0, 2.0) == pytest.approx(math.exp(-4))
    assert kernels.hermite_gaussian(1, 1.0) == pytest.approx(2 * math.exp(-1))
    v = kernels.hermite_gaussian(6, 3.17)
    assert abs(v) <= kernels.hermite_scale(6) * kernels.g_envelope(6, 3.17) * math.exp(-3.17 ** 2 / 2)


def test_hermite_against_mpmath():
    mpmath.mp.dps = 60
    for n in (0, 3, 10, 25, 40):
        for x in (0.0, 0.7, 5.0, 12.5, 40.0, 50.0):
            want = mpmath.hermite(n, x) * mpmath.exp(-mpmath.mpf(x) ** 2)
            got = kernels.hermite_gaussian(n, x)
            if abs(want) < 1e-300:
                assert abs(got) < 1e-290
            else:
                assert got == pytest.approx(float(want), rel=1e-12)


def test_hermite_recurrence():
    xs = np.linspace(-30, 30, 601)
    for n in range(1, 39):
        h0, h1, h2 = (kernels.hermite_gaussian(k, xs) for k in (n - 1, n, n + 1))
        rhs = 2 * xs * h1 - 2 * n * h0
        big = np.abs(h2) > 1e-280
        scale = np.maximum(np.abs(h2), np.abs(2 * xs * h1))
        assert np.all(np.abs(h2 - rhs)[big] <= 1e-12 * scale[big])


def test_hermite_order_limit():
    with pytest.raises(OrderOutOfRangeError):
        kernels.hermite_gaussian(41, 1.0)


def test_hermite_global_bound():
    xs = np.linspace(0, 30, 30001)
    for n in range(0, 21):
        assert np.all(np.abs(kernels.hermite_gaussian(n, xs)) <= kernels.hermite_scale(n) * (1 + 1e-12))


def test_envelope_values():
    e2 = kernels.envelope(2)
    assert e2.x_n == pytest.approx(1.534, abs=5e-4)
    assert e2.g_peak == pytest.approx(1.374, abs=5e-4)
    assert e2.G_n == pytest.approx(2 * e2.g_peak, rel=1e-14)
    e10 = kernels.envelope(10)
    assert (round(e10.x_n, 3), round(e10.g_peak, 3)) == (4.240, 2.635)


def test_envelope_closed_form_consistent():
    for n in range(1, 30):
        e = kernels.envelope(n)
        assert e.G_n == pytest.approx(kernels.hermite_scale(n) * e.g_peak, rel=1e-13)


def test_g_increasing():
    for n in (1, 5, 20):
        x = np.linspace(0, math.sqrt(2 * n + 1) * 0.999, 500)
        assert np.all(np.diff(kernels.g_envelope(n, x)) > 0)


def _erfc_quad(x):
    mpmath.mp.dps = 30
    return float(2 / mpmath.sqrt(mpmath.pi) * mpmath.quad(lambda t: mpmath.exp(-t * t), [x, x + 5, mpmath.inf]))


def test_erfc_real():
    assert kernels.erfc_real(0.0) == 1.0
    assert kernels.erfc_real(1.0) == pytest.approx(ERFC_1, rel=1e-15)
    assert kernels.erfc_real(1.0) == pytest.approx(_erfc_quad(1.0), rel=1e-14)
    assert kernels.erfc_real(-1.0) == pytest.approx(2 - ERFC_1, rel=1e-15)


def test_scaled_erfc_complex():
    assert kernels.scaled_erfc_complex(0.8, 0.0).real == pytest.approx(kernels.erfc_real(0.8), rel=1e-14)
    got = kernels.scaled_erfc_complex(complex(1, -math.pi), -math.pi ** 2)
    assert abs(got - CERFC_1_MIPI) <= 1e-13 * abs(CERFC_1_MIPI)


def test_scaled_erfc_magnitude():
    B, x = 1e-3, 2.0
    for k in range(1, 5):
        z = complex(math.sqrt(B) * x, -math.pi * k / math.sqrt(B))
        lp = -(math.pi * k) ** 2 / B
        v = kernels.scaled_erfc_complex(z, lp)
        assert math.isfinite(abs(v))
        # |exp(lp - z^2)| from the rounded inputs; equals exp(-B x^2) up to their rounding
        modulus = float(mpmath.exp(mpmath.mpf(lp) + mpmath.mpf(z.imag) ** 2 - mpmath.mpf(z.real) ** 2))
        assert modulus == pytest.approx(math.exp(-B * x * x), rel=1e-9)
        assert abs(v) <= modulus * abs(kernels.faddeeva(1j * z)) * (1 + 1e-13)


def test_scaled_erfc_overflow():
    with pytest.raises(NonFiniteResultError):
        kernels.scaled_erfc_complex(complex(0, 40), 0.0)


def test_faddeeva_defect_branches_agree():
    mpmath.mp.dps = 40
    for u in (complex(7.9, 0.3), complex(8.1, 0.3), complex(30, 5), complex(200, 0.1)):
        v = mpmath.mpc(u)
        want = complex(1 + 1j * mpmath.sqrt(mpmath.pi) * v * mpmath.exp(-v ** 2) * mpmath.erfc(-1j * v))
        got = kernels.faddeeva_defect(u)
        # the direct branch just below the switch loses ~2 digits to cancellation
        assert abs(got - want) <= 1e-13 * abs(want)
