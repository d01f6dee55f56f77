import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import sici

from specenv.special import aux_f, aux_g, sine_integral


def test_zero():
    assert sine_integral(0.0) == 0.0


def test_at_pi():
    # power series summed in 50-digit arithmetic
    mpmath.mp.dps = 50
    ref = mpmath.nsum(lambda k: (-1) ** k * mpmath.pi ** (2 * k + 1)
                      / ((2 * k + 1) * mpmath.factorial(2 * k + 1)), [0, mpmath.inf])
    assert abs(sine_integral(math.pi) - float(ref)) < 1e-14
    assert abs(sine_integral(math.pi) - 1.8519370) < 1e-7


@given(st.floats(-1e4, 1e4))
def test_odd(x):
    assert sine_integral(-x) == -sine_integral(x)


def test_against_scipy_and_mpmath():
    x = np.concatenate([np.linspace(-60, 60, 4001), np.geomspace(1e-8, 1e6, 400)])
    err = np.max(np.abs(sine_integral(x) - sici(x)[0]))
    assert err < 1e-12
    mpmath.mp.dps = 30
    for v in (1e-3, 0.7, 3.999, 4.0, 4.001, 10.0, 123.456, 1e5):
        assert abs(sine_integral(v) - float(mpmath.si(v))) < 1e-14


def test_limits_and_specials():
    assert sine_integral(math.inf) == math.pi / 2
    assert sine_integral(-math.inf) == -math.pi / 2
    assert math.isnan(sine_integral(math.nan))
    assert abs(sine_integral(1e8) - math.pi / 2) < 1e-8


def test_array_shape():
    out = sine_integral(np.zeros((3, 2)))
    assert out.shape == (3, 2)


@pytest.mark.parametrize("x", [4.0, 7.5, 30.0, 1000.0])
def test_auxiliary_functions(x):
    mpmath.mp.dps = 30
    ci, si = mpmath.ci(x), mpmath.si(x)
    f = ci * mpmath.sin(x) - (si - mpmath.pi / 2) * mpmath.cos(x)
    g = -ci * mpmath.cos(x) - (si - mpmath.pi / 2) * mpmath.sin(x)
    assert abs(aux_f(x) - float(f)) < 1e-15
    assert abs(aux_g(x) - float(g)) < 1e-15
