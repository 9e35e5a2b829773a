import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltlab.errors import ConfigurationError, DomainError
from ltlab.specfun import beta_fn, bessel_k, gamma_fn, gauss_legendre, lgamma_fn

mpmath.mp.dps = 40


@given(st.floats(min_value=1e-3, max_value=20.0))
def test_gamma_matches_mpmath(x):
    ref = float(mpmath.gamma(x))
    assert gamma_fn(x) == pytest.approx(ref, rel=1e-14)


@given(st.floats(min_value=20.0, max_value=171.0))
def test_gamma_large_arguments(x):
    # the power t**(x-1/2) amplifies rounding in t roughly in proportion to x
    ref = float(mpmath.gamma(x))
    assert gamma_fn(x) == pytest.approx(ref, rel=2e-13)


@given(st.floats(min_value=1e-3, max_value=1e4))
def test_lgamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(x))
    assert lgamma_fn(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)


def test_gamma_half_integers():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma_fn(2.5) == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-15)
    assert gamma_fn(7) == 720.0


@given(st.floats(min_value=0.05, max_value=50), st.floats(min_value=0.05, max_value=50))
def test_beta_symmetric_and_exact(a, b):
    assert beta_fn(a, b) == pytest.approx(beta_fn(b, a), rel=1e-14)
    assert beta_fn(a, b) == pytest.approx(float(mpmath.beta(a, b)), rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_gamma_domain(bad):
    with pytest.raises(DomainError):
        gamma_fn(bad)


@pytest.mark.parametrize("nu", [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.7, 5.0])
@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.1, 0.9, 1.99, 2.0, 2.01, 5.0, 30.0, 200.0])
def test_bessel_k_matches_mpmath(nu, x):
    ref = float(mpmath.besselk(nu, x))
    assert bessel_k(nu, x) == pytest.approx(ref, rel=1e-12)


def test_bessel_k_half_order_closed_form():
    for x in (0.3, 1.0, 4.0):
        assert bessel_k(0.5, x) == pytest.approx(math.sqrt(math.pi / (2 * x)) * math.exp(-x),
                                                 rel=1e-14)


@given(st.floats(min_value=1.0, max_value=4.0), st.floats(min_value=1e-3, max_value=50.0))
def test_bessel_k_recurrence(nu, x):
    # K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
    lhs = bessel_k(nu + 1, x)
    rhs = bessel_k(nu - 1, x) + 2 * nu / x * bessel_k(nu, x)
    assert lhs == pytest.approx(rhs, rel=1e-11)


@pytest.mark.parametrize("args", [(0.0, 0.0), (0.0, -1.0), (6.0, 1.0), (-0.5, 1.0)])
def test_bessel_k_domain(args):
    with pytest.raises(DomainError):
        bessel_k(*args)


@pytest.mark.parametrize("order", [1, 2, 3, 8, 20, 64])
def test_gauss_legendre_against_numpy(order):
    rule = gauss_legendre(order)
    x, w = np.polynomial.legendre.leggauss(order)
    assert rule.order == order
    np.testing.assert_allclose(rule.nodes, x, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w, rtol=1e-12, atol=1e-15)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("order", [200, 512])
def test_gauss_legendre_high_order_against_mpmath(order):
    # numpy's weights lose about 1e-10 here, so compare with extended precision
    rule = gauss_legendre(order)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-13)
    for i in (0, order // 3, order // 2):
        xr = mpmath.findroot(lambda t: mpmath.legendre(order, t), rule.nodes[i])
        dp = mpmath.diff(lambda t: mpmath.legendre(order, t), xr)
        wr = 2 / ((1 - xr ** 2) * dp ** 2)
        assert rule.nodes[i] == pytest.approx(float(xr), abs=1e-15)
        assert rule.weights[i] == pytest.approx(float(wr), rel=1e-12)


@given(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=59))
def test_gauss_legendre_exact_for_polynomials(order, deg):
    deg = deg % (2 * order)
    rule = gauss_legendre(order)
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert rule.integrate(lambda t: t ** deg) == pytest.approx(exact, abs=1e-13)


def test_gauss_legendre_affine_map():
    rule = gauss_legendre(10)
    assert rule.integrate(np.exp, 0.0, 2.0) == pytest.approx(math.e ** 2 - 1, rel=1e-14)
    x, w = rule.scaled(1.0, 3.0)
    assert w.sum() == pytest.approx(2.0)
    assert x.min() > 1.0 and x.max() < 3.0


@pytest.mark.parametrize("order", [0, 513, 2.5, True])
def test_gauss_legendre_order_checked(order):
    with pytest.raises(ConfigurationError):
        gauss_legendre(order)
