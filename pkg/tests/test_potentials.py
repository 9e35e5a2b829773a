import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from ltlab.errors import ConfigurationError, DomainError
from ltlab.potentials import FAMILIES, Potential, parse_potential


def sphere_area(d):
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def radial_quad(f, d, rmax):
    val, _ = integrate.quad(lambda r: f(r) * r ** (d - 1), 0, rmax, limit=400,
                            epsabs=0, epsrel=1e-13)
    return sphere_area(d) * val if d > 1 else 2 * val


POTENTIALS = [
    Potential.gaussian(amp=2.0, width=0.7),
    Potential.gaussian(amp=1.0, width=1.3, d=2, alpha=3.0),
    Potential.gaussian(amp=0.5, width=1.0, d=3),
    Potential.bump(amp=3.0, radius=2.0),
    Potential.bump(amp=1.5, radius=0.8, d=2),
    Potential.bump(amp=1.0, radius=1.0, d=3, alpha=2.0),
    Potential.sech2(amp=1.2, width=0.9),
]


@pytest.mark.parametrize("p", POTENTIALS, ids=str)
@pytest.mark.parametrize("power", [0.5, 1.0, 2.0, 3.5, 5.0])
def test_lp_integral_matches_quadrature(p, power):
    rmax = p.support_radius(1e-300) if p.family != "bump" else p.scale
    ref = radial_quad(lambda r: float(p.radial(r)) ** power, p.d, min(rmax, 60 * p.scale))
    assert p.lp_integral(power) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("p", POTENTIALS, ids=str)
@pytest.mark.parametrize("frac", [0.0, 0.1, 0.5, 0.97])
def test_shifted_integral_matches_quadrature(p, frac):
    tau = frac * p.peak ** 2
    power = 1.5
    r0 = p.level_radius(math.sqrt(tau)) if tau > 0 else min(p.support_radius(1e-300), 60 * p.scale)
    ref = radial_quad(lambda r: max(float(p.radial(r)) ** 2 - tau, 0.0) ** power, p.d, r0)
    assert p.shifted_integral(tau, power) == pytest.approx(ref, rel=1e-9, abs=1e-14)


def test_shifted_integral_vanishes_above_peak():
    p = Potential.gaussian(amp=2.0)
    assert p.shifted_integral(4.0 + 1e-9, 1.0) == 0.0


@pytest.mark.parametrize("p", POTENTIALS, ids=str)
def test_grid_quadrature_agrees(p):
    # the closed form must agree with a plain grid sum at working resolution
    r = p.support_radius(1e-12)
    n = {1: 4001, 2: 801, 3: 161}[p.d]
    x = np.linspace(-r, r, n)
    h = x[1] - x[0]
    mesh = np.meshgrid(*([x] * p.d), indexing="ij")
    grid = float(np.sum(p(*mesh) ** 3)) * h ** p.d
    assert grid == pytest.approx(p.lp_integral(3), rel=1e-6 if p.d < 3 else 1e-3)


def test_evaluation_and_radii():
    p = Potential.gaussian(amp=2.0, width=1.0, alpha=1.5)
    assert p.peak == 3.0
    assert p(np.array([0.0]))[0] == 3.0
    r = p.support_radius(1e-6)
    assert float(p.radial(r)) == pytest.approx(3e-6, rel=1e-10)
    assert float(p.radial(p.level_radius(1.0))) == pytest.approx(1.0, rel=1e-12)
    assert p.level_radius(5.0) == 0.0
    q = Potential.gaussian(d=2)
    assert q(np.array([1.0]), np.array([0.0]))[0] == pytest.approx(math.exp(-1))
    with pytest.raises(DomainError):
        q(np.array([1.0]))


def test_coupling_and_scaling():
    p = Potential.bump(amp=2.0)
    assert p.with_coupling(5.0).peak == 10.0
    assert p.scaled(0.5).peak == 1.0
    assert p.scaled(0.5).lp_integral(2) == pytest.approx(p.lp_integral(2) / 4)


@given(st.sampled_from(FAMILIES), st.floats(0.0, 10.0), st.floats(0.1, 5.0),
       st.floats(0.0, 10.0))
def test_spec_string_round_trip(fam, amp, scale, alpha):
    p = Potential(fam, 1, amp, scale, alpha)
    assert parse_potential(p.spec) == p
    assert parse_potential(str(p)).spec == p.spec


@given(st.floats(0.01, 5.0), st.floats(0.1, 3.0), st.floats(0.5, 4.0))
def test_lp_integral_scales_with_coupling(amp, width, power):
    p = Potential.gaussian(amp=amp, width=width)
    c = 1.7
    assert p.scaled(c).lp_integral(power) == pytest.approx(c ** power * p.lp_integral(power),
                                                           rel=1e-12)


def test_parse_examples():
    p = parse_potential("gaussian:amp=2,width=0.5,d=2")
    assert (p.family, p.amp, p.scale, p.d) == ("gaussian", 2.0, 0.5, 2)
    assert parse_potential("bump:radius=3").scale == 3.0
    assert parse_potential(" SECH2 ").family == "sech2"


@pytest.mark.parametrize("text", ["", "square:amp=1", "gaussian:radius=1", "gaussian:amp",
                                  "gaussian:amp=x", "gaussian:amp=-1", "sech2:d=2",
                                  "gaussian:d=4", "bump:radius=0"])
def test_parse_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_potential(text)


def test_lp_integral_domain():
    with pytest.raises(DomainError):
        Potential.gaussian().lp_integral(0.0)
    assert Potential.gaussian(amp=0.0).lp_integral(2.0) == 0.0
