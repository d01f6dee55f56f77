import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from specenv.errors import ConfigurationError, PrecisionError
from specenv.fourier import FreqGridFunction, GridFunction, make_grid, norm_l1
from specenv.l1bounds import l1_bound, l1_bound_check, split_bound
from specenv.verify import CORPUS_GRID, l1_corpus
from specenv.windows import gamma, omega_symbol, phi, trapezoid_symbol

# frequency spacing 1e-3 (kinks of the windows fall on nodes), Nyquist about 4200
WIDE = make_grid(1000 * math.pi, 2 ** 23)


def test_trapezoid_bound():
    b = l1_bound(FreqGridFunction.from_symbol(WIDE, trapezoid_symbol(1)))
    # centered differences across the four kinks cost O(spacing) in ||tau'||^2
    assert b.bound == pytest.approx(2 ** 1.5 * 3 ** -0.25, rel=5e-4)
    g = make_grid(400, 2 ** 16)
    assert norm_l1(GridFunction.from_function(g, phi(1))) <= b.bound


def test_omega_bound():
    b = l1_bound(FreqGridFunction.from_symbol(WIDE, omega_symbol(1)))
    exact = math.sqrt(2 * math.sqrt(4 - 4 * math.log(2)) * math.sqrt(2 / 3))
    assert b.bound == pytest.approx(exact, rel=1e-3)
    assert b.bound < 1.35


def test_gaussian_all_three_norms():
    g = make_grid(100, 8192)
    fhat = FreqGridFunction(g, math.sqrt(2 * math.pi) * np.exp(-g.frequencies ** 2 / 2))
    b = l1_bound(fhat)
    # ||fhat||_2^2 = 2 pi sqrt(pi), ||fhat'||_2^2 = pi sqrt(pi)
    assert b.l2_hat == pytest.approx(math.sqrt(2 * math.pi ** 1.5), rel=1e-10)
    assert b.l2_hat_deriv == pytest.approx(math.sqrt(math.pi ** 1.5), rel=1e-3)
    f = GridFunction.from_function(g, lambda t: np.exp(-t ** 2 / 2))
    assert norm_l1(f) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)
    assert norm_l1(f) <= b.bound


def test_zero_rejected():
    g = make_grid(10, 64)
    with pytest.raises(ConfigurationError):
        l1_bound(FreqGridFunction(g, np.zeros(64)))
    with pytest.raises(ConfigurationError):
        l1_bound_check(GridFunction(g, np.zeros(64)))


def test_edge_decay_required():
    g = make_grid(10, 256)
    with pytest.raises(PrecisionError):
        l1_bound_check(GridFunction.from_function(g, lambda t: 1 / (1 + t ** 2)))


@pytest.mark.parametrize("name", sorted(l1_corpus()))
def test_corpus_holds(name):
    res = l1_bound_check(GridFunction.from_function(CORPUS_GRID, l1_corpus()[name]))
    assert res.holds
    assert res.l1 ** 2 <= res.bound ** 2 * (1 + 1e-6)


def test_phi_and_gamma_checks():
    for h in (phi(1), gamma(1)):
        assert l1_bound_check(GridFunction.from_function(CORPUS_GRID, h)).holds


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 3), st.floats(-5, 5), st.floats(-3, 3))
def test_random_gaussians_hold(width, center, freq):
    g = make_grid(60, 4096)
    f = GridFunction.from_function(g, lambda t: np.exp(-((t - center) / width) ** 2 + 1j * freq * t))
    assert l1_bound_check(f).holds


@settings(max_examples=30)
@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_split_bound_minimized_at_a_opt(n0, n1):
    res = minimize_scalar(lambda la: split_bound(math.exp(la), n0, n1),
                          bounds=(-8, 8), method="bounded", options={"xatol": 1e-9})
    a_opt = n1 / n0
    assert math.exp(res.x) == pytest.approx(a_opt, rel=1e-4)
    assert split_bound(a_opt, n0, n1) == pytest.approx(math.sqrt(2 * n0 * n1), rel=1e-12)
    assert split_bound(a_opt, n0, n1) <= res.fun * (1 + 1e-12)


def test_as_dict_keys():
    g = make_grid(20, 1024)
    res = l1_bound_check(GridFunction.from_function(g, lambda t: np.exp(-t ** 2)))
    assert set(res.as_dict()) == {"l1", "l2_hat", "l2_hat_deriv", "bound", "a_opt", "holds"}
