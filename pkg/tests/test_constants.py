import csv
import io
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltlab.constants import (
    CSV_COLUMNS,
    BoundEntry,
    ConstantQuery,
    aizenman_lieb_identity,
    daubechies_lower_factor,
    delta_plane_constant,
    dump_constants_csv,
    duality_factor,
    lt_classical,
    optimal_rho,
    rel_classical,
    relativistic_bound_candidates,
    relativistic_bound_table,
    sobolev_trace_constant,
    surface_bound_table,
    surface_lower_bounds,
)
from ltlab.errors import DomainError, NoBoundError

mpmath.mp.dps = 50


def phase_space_lt(gamma, d):
    """(2 pi)^-d int_{R^d} (1 - |xi|^2)_+^gamma dxi by the radial integral."""
    gamma, d = mpmath.mpf(gamma), int(d)
    if d == 0:
        return mpmath.mpf(1)
    area = 2 * mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2)
    radial = mpmath.quad(lambda r: (1 - r * r) ** gamma * r ** (d - 1), [0, 1])
    return area * radial / (2 * mpmath.pi) ** d


def phase_space_rel(gamma, d):
    """(2 pi)^-d int (1 - |xi|)_+^gamma dxi."""
    gamma, d = mpmath.mpf(gamma), int(d)
    area = 2 * mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2)
    radial = mpmath.quad(lambda r: (1 - r) ** gamma * r ** (d - 1), [0, 1])
    return area * radial / (2 * mpmath.pi) ** d


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 1.5, 2.7, 4.0])
@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_lt_classical_is_phase_space_volume(gamma, d):
    assert lt_classical(gamma, d) == pytest.approx(float(phase_space_lt(gamma, d)), rel=1e-12)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 2.0, 3.3])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_rel_classical_is_phase_space_volume(gamma, d):
    assert rel_classical(gamma, d) == pytest.approx(float(phase_space_rel(gamma, d)), rel=1e-12)


def test_lt_classical_d0_is_one():
    assert lt_classical(2.5, 0) == 1.0


@given(st.floats(min_value=0.0, max_value=30.0), st.integers(min_value=2, max_value=12))
def test_dimension_recursion(gamma, d):
    lhs = lt_classical(gamma, 1) * lt_classical(gamma + 0.5, d - 1)
    assert lhs == pytest.approx(lt_classical(gamma, d), rel=1e-12)


@given(st.integers(min_value=1, max_value=40))
def test_count_constants_coincide(d):
    assert lt_classical(0, d) == pytest.approx(rel_classical(0, d), rel=1e-13)


def test_constant_query_validation():
    q = ConstantQuery(1, 2)
    assert q.gamma == 1.0 and isinstance(q.gamma, float)
    for bad in [(-1, 1), (math.nan, 1), (1, -1), (1, 1.5), (1, True)]:
        with pytest.raises(DomainError):
            ConstantQuery(*bad)
    with pytest.raises(DomainError):
        rel_classical(1, 0)


def test_large_gamma_uses_log_path():
    val = lt_classical(200.0, 3)
    ref = float(phase_space_lt(200, 3))
    assert val == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("d", range(2, 12))
def test_sobolev_constant_two_routes(d):
    direct = sobolev_trace_constant(d)
    ref = mpmath.mpf(d - 1) / 2 * 2 ** (mpmath.mpf(1) / d) \
        * mpmath.pi ** (mpmath.mpf(d + 1) / (2 * d)) * mpmath.gamma(mpmath.mpf(d + 1) / 2) ** (-mpmath.mpf(1) / d)
    assert direct == pytest.approx(float(ref), rel=1e-13)
    assert sobolev_trace_constant(d, use_log=True) == pytest.approx(direct, rel=1e-13)


def test_sobolev_constant_d2():
    assert sobolev_trace_constant(2) == pytest.approx(math.sqrt(math.pi), abs=1e-14)
    with pytest.raises(DomainError):
        sobolev_trace_constant(1)


@pytest.mark.parametrize("d", range(2, 30))
def test_daubechies_factor_useful_only_up_to_seven(d):
    f = daubechies_lower_factor(d)
    exact = mpmath.mpf(2) ** (d - 1) * mpmath.factorial(d) / mpmath.mpf(d - 1) ** d
    assert f == pytest.approx(float(exact), rel=1e-14)
    assert (f > 1) == (d <= 7)


def test_daubechies_factor_small_dimensions():
    assert daubechies_lower_factor(2) == 4.0
    assert daubechies_lower_factor(3) == 3.0


@pytest.mark.parametrize("gamma,d,factor,kind", [
    (2.0, 5, 1.0, "sharp"),
    (1.5, 1, 1.0, "sharp"),
    (1.0, 1, math.pi / math.sqrt(3), "upper"),
    (1.2, 3, math.pi / math.sqrt(3), "upper"),
    (0.5, 1, 2.0, "upper"),
    (0.7, 2, 2 * math.pi / math.sqrt(3), "upper"),
    (0.0, 2, 6.04, "upper"),
    (0.0, 3, 6.07, "upper"),
    (0.0, 4, 10.332, "upper"),
])
def test_surface_bound_table(gamma, d, factor, kind):
    e = surface_bound_table(gamma, d)
    assert e.factor == pytest.approx(factor, rel=1e-15)
    assert e.kind == kind
    assert e.source and e.window


def test_surface_bound_refusals():
    with pytest.raises(NoBoundError, match="d=1"):
        surface_bound_table(0.0, 1)
    with pytest.raises(NoBoundError):
        surface_bound_table(0.25, 2)


@given(st.floats(min_value=0.5, max_value=10.0), st.integers(min_value=1, max_value=6))
def test_surface_factor_one_exactly_on_sharp_window(gamma, d):
    f = surface_bound_table(gamma, d).factor
    assert (f == 1.0) == (gamma >= 1.5)
    assert f >= 1.0


def test_surface_lower_bounds():
    facs = sorted(e.factor for e in surface_lower_bounds(0.0, 2))
    assert facs == [1.0, 4.0]
    assert [e.factor for e in surface_lower_bounds(0.0, 9)] == [1.0]


def test_bound_entry_validation():
    with pytest.raises(ValueError):
        BoundEntry(0.0, "w", "upper", "s")
    with pytest.raises(ValueError):
        BoundEntry(2.0, "w", "sharp", "s")
    with pytest.raises(ValueError):
        BoundEntry(2.0, "w", "middle", "s")


def test_delta_plane_constant_is_rescaled_surface_constant():
    val, entry = delta_plane_constant(2.0, 1)
    assert entry.kind == "sharp"
    assert val == pytest.approx(2.0 ** -5 * lt_classical(2.0, 1), rel=1e-15)


def test_relativistic_table():
    assert relativistic_bound_table(0.0, 2).factor == 6.04
    assert relativistic_bound_table(2.0, 2).factor == pytest.approx(math.sqrt(3) * math.pi)
    assert relativistic_bound_table(3.0, 2).factor == pytest.approx(4.0)
    assert relativistic_bound_table(3.0, 3).factor == pytest.approx(15 * math.pi / 8)
    with pytest.raises(NoBoundError):
        relativistic_bound_table(0.0, 1)


@given(st.floats(min_value=1.0, max_value=8.0), st.integers(min_value=1, max_value=3))
def test_relativistic_duality_entry(gamma, d):
    # D_{g,d} <= S_{g/2,d} expressed against D^cl
    cands = relativistic_bound_candidates(gamma, d)
    dual = [e for e in cands if "moment duality" in e.source]
    assert len(dual) == 1
    s = surface_bound_table(gamma / 2, d)
    assert dual[0].factor * rel_classical(gamma, d) == pytest.approx(
        s.factor * lt_classical(gamma / 2, d), rel=1e-13)
    assert relativistic_bound_table(gamma, d).factor <= dual[0].factor


def test_optimal_rho_example():
    rho, f = optimal_rho(1.0, 1)
    assert rho == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert f == pytest.approx(0.5, abs=1e-15)


@given(st.floats(min_value=0.05, max_value=20.0), st.integers(min_value=1, max_value=6))
def test_optimal_rho_minimizes(gamma, d):
    rho, f = optimal_rho(gamma, d)

    def objective(r):
        return (r / np.sqrt(1 - r * r)) ** gamma * r ** (-gamma - d)

    assert f * objective(rho) == pytest.approx(1.0, rel=1e-12)
    grid = np.linspace(1e-3, 1 - 1e-3, 2001)
    assert np.all(objective(grid) >= objective(rho) * (1 - 1e-12))


def test_optimal_rho_factor_decreases_in_gamma():
    fs = [optimal_rho(g, 1)[1] for g in (1, 2, 5, 10, 100)]
    assert all(a > b for a, b in zip(fs, fs[1:]))
    with pytest.raises(DomainError):
        optimal_rho(0.0, 1)


def test_duality_factor():
    assert duality_factor(1.0, 1 / math.sqrt(2)) == pytest.approx(1.0)
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            duality_factor(1.0, bad)


@pytest.mark.parametrize("t,gamma,gamma0,expected", [
    (-1.0, 2.0, 1.0, 1.0),
    (-3.0, 1.5, 0.5, 3 ** 1.5),
])
def test_aizenman_lieb_examples(t, gamma, gamma0, expected):
    assert aizenman_lieb_identity(t, gamma, gamma0) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("eps", [0.5, 0.25, 0.1])
def test_aizenman_lieb_small_gap(eps):
    assert aizenman_lieb_identity(-1.0, 1.0 + eps, 1.0) == pytest.approx(1.0, rel=1e-10)


@given(st.floats(min_value=-50.0, max_value=-1e-3), st.floats(min_value=0.0, max_value=4.0),
       st.floats(min_value=0.1, max_value=4.0))
def test_aizenman_lieb_property(t, gamma0, gap):
    gamma = gamma0 + gap
    assert aizenman_lieb_identity(t, gamma, gamma0) == pytest.approx(abs(t) ** gamma, rel=1e-8)


def test_aizenman_lieb_domain():
    with pytest.raises(DomainError):
        aizenman_lieb_identity(1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        aizenman_lieb_identity(-1.0, 1.0, 1.0)


def test_constants_csv_schema():
    text = dump_constants_csv([(1.5, 1), (0.0, 1), (0.0, 2)])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    body = [dict(zip(CSV_COLUMNS, r)) for r in rows[1:]]
    lcl = [r for r in body if r["quantity"] == "L_cl" and r["gamma"] == "1.5"]
    assert float(lcl[0]["value"]) == pytest.approx(3 / 16, rel=1e-14)
    refusal = [r for r in body if r["gamma"] == "0" and r["d"] == "1" and r["kind"] == "none"]
    assert refusal and all(r["value"] == "nan" for r in refusal)
    assert any(r["quantity"] == "S_prime" for r in body if r["d"] == "2")
    assert dump_constants_csv([(1.5, 1)]) == dump_constants_csv([(1.5, 1)])
