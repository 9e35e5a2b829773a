import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltlab.errors import (
    CapacityError,
    CompletenessError,
    ConfigurationError,
    DomainError,
    ResolutionWarning,
    TruncationWarning,
)
from ltlab.numerics import eig_dense
from ltlab.operators import (
    BoxGrid,
    HalfSpaceGrid,
    birman_schwinger_matrix,
    count_above_one,
    count_negatives_relativistic,
    delta_plane_matrix,
    duality_counts,
    negative_spectrum,
    nystrom_birman_schwinger,
    relativistic_matrix,
    robin_halfline_matrix,
    robin_halfspace_matrix,
    schroedinger_box_matrix,
    surface_count,
    waveguide_riesz_exact,
)
from ltlab.potentials import Potential


def test_box_grid_geometry():
    g = BoxGrid(1, 5.0, 16)
    assert g.h == pytest.approx(10 / 16)
    assert g.points[0] == -5.0 and g.points.size == 16
    k = np.sort(g.frequencies)
    np.testing.assert_allclose(k, math.pi / 5 * np.arange(-8, 8))
    assert g.refined().modes == 32
    e = g.enlarged()
    assert e.modes == 24 and e.h == pytest.approx(g.h)
    g2 = BoxGrid(2, 1.0, 4)
    assert len(g2.mesh()) == 2 and g2.mesh()[0].size == 16
    assert g2.symbol_grid().shape == (4, 4)


@pytest.mark.parametrize("args", [(4, 1.0, 8), (1, 0.0, 8), (1, 1.0, 7), (1, 1.0, 0)])
def test_box_grid_validation(args):
    with pytest.raises(ConfigurationError):
        BoxGrid(*args)


def test_halfspace_grid_geometry():
    g = HalfSpaceGrid(4.0, 3.0, 39, 29)
    assert g.hx == pytest.approx(0.2) and g.hy == pytest.approx(0.1)
    assert g.x.size == 39 and g.y[0] == 0.0
    r = g.refined()
    assert r.hx == pytest.approx(0.1) and r.hy == pytest.approx(0.05)
    e = g.enlarged()
    assert e.hx == pytest.approx(g.hx) and e.x_half_length == pytest.approx(6.0)
    with pytest.raises(ConfigurationError):
        HalfSpaceGrid(1.0, 1.0, 0, 5)


@pytest.mark.parametrize("d,L,M", [(1, 3.0, 32), (2, 2.0, 8)])
def test_free_relativistic_spectrum_is_abs_frequency(d, L, M):
    g = BoxGrid(d, L, M)
    op = relativistic_matrix(Potential.gaussian(amp=0.0, d=d), g, tau=0.3)
    ev = eig_dense(op.matrix).eigenvalues
    ref = np.sort(np.sqrt(g.symbol_grid().ravel() + 0.3))
    np.testing.assert_allclose(ev, ref, atol=1e-12)
    assert op.meta["symmetry_defect"] < 1e-12


def test_relativistic_matrix_capacity_and_dimension():
    with pytest.raises(CapacityError):
        relativistic_matrix(Potential.gaussian(), BoxGrid(1, 10.0, 4096))
    with pytest.raises(ConfigurationError):
        relativistic_matrix(Potential.gaussian(d=2), BoxGrid(1, 10.0, 64))
    with pytest.raises(DomainError):
        relativistic_matrix(Potential.gaussian(), BoxGrid(1, 10.0, 64), tau=-1.0)


def test_truncation_warning():
    with pytest.warns(TruncationWarning) as rec:
        relativistic_matrix(Potential.gaussian(width=3.0), BoxGrid(1, 4.0, 64))
    assert rec[0].message.estimate > 0


def test_lower_bound_is_below_spectrum():
    p = Potential.gaussian(amp=2.0)
    op = relativistic_matrix(p, BoxGrid(1, 10.0, 128))
    assert eig_dense(op.matrix).eigenvalues[0] > op.lower_bound


def test_schroedinger_box_matrix_free():
    g = BoxGrid(1, 3.0, 16)
    op = schroedinger_box_matrix(Potential.gaussian(amp=0.0), g)
    np.testing.assert_allclose(eig_dense(op.matrix).eigenvalues, np.sort(g.symbol_grid()),
                               atol=1e-11)


def test_birman_schwinger_drops_zero_rows():
    p = Potential.bump(amp=2.0, radius=1.0)
    g = BoxGrid(1, 5.0, 100)
    op = birman_schwinger_matrix(p, g, 0.5)
    assert op.n < g.modes
    assert np.all(np.abs(g.points[op.meta["support"]]) < 1.0)
    with pytest.raises(DomainError):
        birman_schwinger_matrix(p, g, 0.0)


@pytest.mark.parametrize("amp", [0.5, 2.0, 5.0])
@pytest.mark.parametrize("tau", [0.05, 0.4, 1.3])
def test_birman_schwinger_count_equals_direct_count(amp, tau):
    p = Potential.gaussian(amp=amp)
    g = BoxGrid(1, 10.0, 256)
    res = count_negatives_relativistic(p, g, tau, route="both", details=True)
    assert res.bs_count == res.direct_count == res.count


@pytest.mark.filterwarnings("ignore::ltlab.errors.TruncationWarning")
@given(st.floats(0.1, 6.0), st.floats(0.01, 4.0))
def test_birman_schwinger_principle_property(amp, tau):
    p = Potential.sech2(amp=amp)
    g = BoxGrid(1, 12.0, 128)
    direct = relativistic_matrix(p, g, tau).matrix
    ev = eig_dense(direct).eigenvalues
    if np.min(np.abs(ev)) < 1e-6:
        return
    c, near = count_above_one(birman_schwinger_matrix(p, g, tau))
    assert not near
    assert c == int(np.sum(ev < 0))


@pytest.mark.filterwarnings("ignore::ltlab.errors.TruncationWarning")
def test_birman_schwinger_two_dimensional():
    p = Potential.gaussian(amp=4.0, d=2)
    g = BoxGrid(2, 4.0, 24)
    res = count_negatives_relativistic(p, g, 0.2, route="both", details=True)
    assert res.bs_count == res.direct_count


def test_count_routes_and_errors():
    p = Potential.gaussian(amp=2.0)
    g = BoxGrid(1, 10.0, 128)
    assert count_negatives_relativistic(p, g) == count_negatives_relativistic(p, g, route="direct")
    assert count_negatives_relativistic(Potential.gaussian(amp=0.0), g, 0.1) == 0
    with pytest.raises(DomainError):
        count_negatives_relativistic(p, g, 0.0, route="bs")
    with pytest.raises(ConfigurationError):
        count_negatives_relativistic(p, g, 0.1, route="magic")


def test_count_warns_near_threshold():
    # the free operator sqrt(k^2) has an eigenvalue exactly at 0
    g = BoxGrid(1, 10.0, 64)
    with pytest.warns(ResolutionWarning):
        count_negatives_relativistic(Potential.gaussian(amp=1e-12), g, route="direct")


def test_surface_count_is_monotone():
    p = Potential.gaussian(amp=3.0)
    g = BoxGrid(1, 20.0, 512)
    counts = [surface_count(p, g, t) for t in (0.0, 0.01, 0.5, 2.0, 8.0, 9.5)]
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] == 0 and counts[0] >= 1


def test_nystrom_matches_fourier_multiplier():
    p = Potential.gaussian(amp=2.0)
    nys = nystrom_birman_schwinger(p, 0.7, -6.0, 6.0, 400)
    bs = birman_schwinger_matrix(p, BoxGrid(1, 30.0, 1024), 0.7)
    a = eig_dense(nys.matrix).eigenvalues[-3:]
    b = eig_dense(bs.matrix).eigenvalues[-3:]
    np.testing.assert_allclose(a, b, atol=1e-4)
    with pytest.raises(DomainError):
        nystrom_birman_schwinger(p, 0.0, -1, 1, 10)


def test_halfline_eigenvalue_formula():
    for v in (0.5, 1.0, 3.0):
        op = robin_halfline_matrix(v, 20.0, 400)
        h = op.meta["h"]
        s = negative_spectrum(op)
        assert len(s) == 1
        exact = (2 - 2 * math.sqrt(1 + v * v * h * h)) / h ** 2
        # the Dirichlet end at Y shifts the value by about exp(-2 v Y)
        assert s.eigenvalues[0] == pytest.approx(exact, rel=1e-7)
        assert s.eigenvalues[0] > op.lower_bound


def test_halfline_no_bound_state_without_potential():
    op = robin_halfline_matrix(0.0, 10.0, 50)
    assert op.count_below(0.0) == 0


def test_robin_matrix_resolution_warning():
    with pytest.warns(ResolutionWarning):
        robin_halfspace_matrix(Potential.gaussian(amp=5.0), HalfSpaceGrid(5.0, 5.0, 20, 10))


def test_robin_ground_state_bounds():
    # -max v^2 bounds the form from below; the ground state deepens with v
    g = HalfSpaceGrid(7.0, 10.0, 139, 199)
    e0 = []
    for amp in (0.5, 1.0):
        op = robin_halfspace_matrix(Potential.bump(amp=amp, radius=6.0), g)
        s = negative_spectrum(op, max_count=40)
        assert -amp ** 2 < s.eigenvalues[0] < 0
        e0.append(s.eigenvalues[0])
    assert e0[1] < e0[0]


def test_delta_plane_equals_robin_with_half_potential():
    p = Potential.gaussian(amp=4.0)
    g = HalfSpaceGrid(4.0, 4.0, 49, 39)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        dp = negative_spectrum(delta_plane_matrix(p, g)).eigenvalues
        rb = negative_spectrum(robin_halfspace_matrix(p.scaled(0.5), g)).eigenvalues
    assert dp.size == rb.size
    np.testing.assert_allclose(dp, rb, rtol=1e-9)


def test_negative_spectrum_sparse_matches_dense():
    p = Potential.gaussian(amp=2.0)
    op = robin_halfspace_matrix(p, HalfSpaceGrid(5.0, 5.0, 39, 49))
    s = negative_spectrum(op)
    ev = np.linalg.eigvalsh(op.matrix.to_dense())
    np.testing.assert_allclose(s.eigenvalues, ev[ev < 0], atol=1e-9)
    assert s.covers == 0.0
    with pytest.raises(CapacityError):
        negative_spectrum(op, max_count=0)


def test_duality_counts_rows():
    p = Potential.gaussian(amp=3.0)
    rows = duality_counts(p, [0.1, 1.0], HalfSpaceGrid(6.0, 6.0, 59, 119),
                          BoxGrid(1, 20.0, 512))
    assert [r["tau"] for r in rows] == [0.1, 1.0]
    assert all(r["equal"] for r in rows)
    with pytest.raises(DomainError):
        duality_counts(p, [0.0], HalfSpaceGrid(6.0, 6.0, 9, 9), BoxGrid(1, 20.0, 64))


def test_waveguide_exact_sum():
    assert waveguide_riesz_exact(math.pi, 2.0, 1.0, 10) == 3.0
    assert waveguide_riesz_exact(math.pi, 2.5, 0.0, 10) == 2.0
    with pytest.raises(CompletenessError):
        waveguide_riesz_exact(math.pi, 5.0, 1.0, 3)
    with pytest.raises(DomainError):
        waveguide_riesz_exact(-1.0, 1.0, 1.0, 3)
