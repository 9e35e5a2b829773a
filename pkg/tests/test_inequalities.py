import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import special_ortho_group

from ltlab.constants import lt_classical, rel_classical
from ltlab.errors import ConfigurationError, DataError, DomainError, NoBoundError
from ltlab.inequalities import (
    CHECKERS,
    REPORT_COLUMNS,
    VERDICTS,
    BKSTrial,
    InequalityReport,
    bks_fuzz,
    check_bks_schroedinger_chain,
    check_duality_sandwich,
    check_relativistic_lt,
    check_sharp_shifted,
    check_surface_lt,
    check_waveguide,
    combine_verdicts,
    decide,
    evaluate_trial,
    fuzz_summary,
    lower_bound_certificate,
    minimize_counterexample,
    psd_power,
    reports_to_json,
    sobolev_quotient,
    write_reports_csv,
)
from ltlab.inequalities import bks as bks_mod
from ltlab.operators import BoxGrid, HalfSpaceGrid
from ltlab.potentials import Potential

SCHEMA_KEYS = {"name", "paper_ref", "lhs", "rhs", "factor", "ratio", "verdict", "certificates",
               "inputs", "extra"}
INPUT_KEYS = {"potential", "gamma", "d", "tau", "grid"}


# -- verdict rule ------------------------------------------------------------

@given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 1), st.booleans())
def test_decide_rule(lhs, rhs, err, conv):
    v = decide(lhs, rhs, err, conv)
    assert v in VERDICTS
    if lhs + err <= rhs:
        assert v == "holds"
    if conv:
        assert v == ("holds" if lhs <= rhs + err else "violated")
    else:
        assert v != "violated"


def test_decide_infinite_right_side():
    assert decide(5.0, math.inf, 0.0, False) == "holds"


def test_combine_verdicts():
    assert combine_verdicts(["holds", "holds"]) == "holds"
    assert combine_verdicts(["holds", "inconclusive"]) == "inconclusive"
    assert combine_verdicts(["inconclusive", "violated", "holds"]) == "violated"
    assert combine_verdicts([]) == "holds"


# -- report schema -----------------------------------------------------------

def _report(**kw):
    base = dict(name="x", paper_ref="ref", lhs=1.0, rhs=2.0, factor=1.0, verdict="holds",
                certificates=[{"status": "converged", "error": 0.0}],
                inputs={"potential": "gaussian:amp=1,width=1", "gamma": 1.0, "d": 1,
                        "tau": 0.0, "grid": {"kind": "box"}})
    base.update(kw)
    return InequalityReport(**base)


def test_report_ratio_and_validation():
    assert _report().ratio == 0.5
    assert _report(lhs=0.0, rhs=0.0).ratio == 0.0
    assert _report(lhs=1.0, rhs=0.0, verdict="violated").ratio == math.inf
    with pytest.raises(ValueError):
        _report(verdict="maybe")


def test_report_json_schema_and_determinism():
    r = _report(rhs=math.inf, extra={"arr": np.arange(3)})
    d = json.loads(r.to_json())
    assert set(d) == SCHEMA_KEYS
    assert INPUT_KEYS <= set(d["inputs"])
    assert d["rhs"] == "inf" and d["extra"]["arr"] == [0, 1, 2]
    assert r.to_json() == r.to_json()
    arr = json.loads(reports_to_json([r, _report()]))
    assert len(arr) == 2


def test_report_csv():
    text = write_reports_csv([_report(), _report(lhs=1 / 3)])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == REPORT_COLUMNS
    row = dict(zip(REPORT_COLUMNS, rows[2]))
    assert float(row["lhs"]) == 1 / 3
    assert row["potential"] == "gaussian:amp=1,width=1" and float(row["tau"]) == 0.0


def test_checker_registry():
    assert set(CHECKERS) == {"surface-lt", "sharp-shifted", "relativistic-lt",
                             "duality-sandwich", "massive", "bks-schroedinger-chain",
                             "waveguide", "lower-bound-certificate"}


# -- checkers ----------------------------------------------------------------

def test_waveguide_example():
    r = check_waveguide(math.pi, 2.0, 1.0)
    assert r.lhs == 3.0
    assert r.rhs == pytest.approx(16 / 3, rel=1e-14)
    assert r.verdict == "holds"
    assert set(json.loads(r.to_json())) == SCHEMA_KEYS


@given(st.floats(0.3, 5.0), st.floats(0.1, 20.0), st.floats(0.0, 3.0))
def test_waveguide_never_exceeds_classical_bound(L, v0, gamma):
    r = check_waveguide(L, v0, gamma)
    assert r.verdict == "holds"
    assert r.lhs <= r.rhs * (1 + 1e-12)


def test_sharp_shifted_halfline():
    for tau, expected in ((0.0, 1.0), (0.5, 0.5 ** 1.5), (2.0, 0.0)):
        r = check_sharp_shifted(1.0, 1.5, tau=tau)
        assert r.rhs == pytest.approx(expected, abs=1e-15)
        assert r.lhs == pytest.approx(expected, abs=1e-3)
        assert r.verdict == "holds"
    with pytest.raises(NoBoundError):
        check_sharp_shifted(1.0, 1.0)


def test_surface_lt_default_grid():
    p = Potential.gaussian(amp=2.0)
    r = check_surface_lt(p, 1.5)
    assert r.verdict == "holds"
    assert r.certificates[0]["status"] == "converged"
    assert r.factor == 1.0
    assert 0 < r.ratio < 1
    assert r.rhs == pytest.approx(lt_classical(1.5, 1) * p.lp_integral(4.0))


def test_surface_lt_weak_binding_decided_by_margin():
    # a shallow bound state is not converged on the default domain, but the
    # margin exceeds the certificate error
    r = check_surface_lt(Potential.gaussian(amp=1.0), 1.5)
    c = r.certificates[0]
    assert c["status"] == "warning"
    assert r.lhs + c["error"] <= r.rhs
    assert r.verdict == "holds"


def test_surface_lt_refusals():
    with pytest.raises(NoBoundError):
        check_surface_lt(Potential.gaussian(), 0.0)
    with pytest.raises(ConfigurationError):
        check_surface_lt(Potential.gaussian(d=2), 1.0)
    r = check_surface_lt(Potential.gaussian(amp=0.0), 1.0)
    assert (r.lhs, r.rhs, r.verdict) == (0.0, 0.0, "holds")


def test_surface_lt_scaling_invariance():
    # v -> v(x/l)/l with all lengths scaled by l maps the discrete problem onto itself
    g = HalfSpaceGrid(5.0, 5.0, 59, 49)
    a = check_surface_lt(Potential.gaussian(amp=1.5), 1.0, grid=g, refine=False)
    lam = 2.0
    g2 = HalfSpaceGrid(5.0 * lam, 5.0 * lam, 59, 49)
    b = check_surface_lt(Potential.gaussian(amp=1.5 / lam, width=lam), 1.0, grid=g2,
                         refine=False)
    assert b.ratio == pytest.approx(a.ratio, rel=1e-9)
    assert b.lhs == pytest.approx(a.lhs / lam ** 2, rel=1e-9)


def test_relativistic_lt_d1():
    p = Potential.gaussian(amp=2.0)
    r = check_relativistic_lt(p, 1.0)
    assert r.verdict == "holds"
    assert r.extra["ratio_classical"] == pytest.approx(
        r.lhs / (rel_classical(1.0, 1) * p.lp_integral(2.0)))
    with pytest.raises(NoBoundError):
        check_relativistic_lt(p, 0.0)


def test_relativistic_scaling_invariance():
    g = BoxGrid(1, 10.0, 256)
    a = check_relativistic_lt(Potential.gaussian(amp=2.0), 1.0, grid=g, refine=False)
    lam = 3.0
    b = check_relativistic_lt(Potential.gaussian(amp=2.0 / lam, width=lam), 1.0,
                              grid=BoxGrid(1, 10.0 * lam, 256), refine=False)
    assert b.ratio == pytest.approx(a.ratio, rel=1e-9)


def test_relativistic_lt_d2_improved_factor_listed():
    p = Potential.bump(amp=3.0, radius=2.0, d=2)
    r = check_relativistic_lt(p, 2.0, grid=BoxGrid(2, 4.0, 24), refine=False)
    assert r.factor == pytest.approx(math.sqrt(3) * math.pi)
    assert r.extra["improved_factors"][0]["label"] == "sqrt(3) pi"
    assert r.verdict in ("holds", "inconclusive")


def test_sandwich_rho_one_is_trivial_on_the_right():
    p = Potential.gaussian(amp=1.0)
    r = check_duality_sandwich(p, 1.0, rho=1.0, grid=BoxGrid(1, 10.0, 256), refine=False)
    assert r.rhs == math.inf and r.extra["right_verdict"] == "holds"
    assert r.extra["left"] <= r.extra["middle"] + 1e-9
    with pytest.raises(DomainError):
        check_duality_sandwich(p, 1.0, rho=1.5)
    with pytest.raises(DomainError):
        check_duality_sandwich(p, 0.0)


def test_bks_chain():
    p = Potential.gaussian(amp=2.0)
    r = check_bks_schroedinger_chain(p, 1.0, grid=BoxGrid(1, 10.0, 256), refine=False)
    assert r.lhs <= r.rhs
    assert r.extra["matrix_level_lhs"] == pytest.approx(r.lhs, rel=1e-8)
    assert r.extra["matrix_level_rhs"] == pytest.approx(r.rhs, rel=1e-8)
    assert r.extra["classical_bound"]["holds"]
    with pytest.raises(DomainError):
        check_bks_schroedinger_chain(p, 0.5)


def test_sobolev_quotient_is_scale_invariant():
    g = BoxGrid(2, 16.0, 128)
    a = sobolev_quotient(Potential.gaussian(d=2)(*g.mesh()), g)
    g2 = BoxGrid(2, 32.0, 128)
    b = sobolev_quotient(Potential.gaussian(width=2.0, d=2)(*g2.mesh()), g2)
    assert a == pytest.approx(b, rel=1e-12)
    assert a > math.sqrt(math.pi)


def test_lower_bound_certificate_d2():
    r = lower_bound_certificate(2)
    assert r.verdict == "holds"
    assert r.lhs == pytest.approx(math.sqrt(math.pi))
    assert r.factor == 4.0
    with pytest.raises(ConfigurationError):
        lower_bound_certificate(4)


# -- BKS matrix inequality ---------------------------------------------------

def test_bks_scalar_example():
    t = BKSTrial(1, 0.5, 1.0, 0, np.array([[4.0]]), np.array([[1.0]]))
    r = evaluate_trial(t)
    assert r["lhs"] == pytest.approx(1.0, abs=1e-14)
    assert r["rhs"] == pytest.approx(math.sqrt(3), abs=1e-14)
    assert r["trace_ok"] and r["operator_ok"]


def test_psd_power():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((5, 3))
    a = x @ x.T
    half = psd_power(a, 0.5)
    np.testing.assert_allclose(half @ half, a, atol=1e-10)
    np.testing.assert_allclose(psd_power(a, 1.0), a, atol=1e-10)


def test_trial_validation():
    with pytest.raises(DomainError):
        BKSTrial(1, 1.0, 1.0, 0, np.eye(1), np.eye(1))
    with pytest.raises(DomainError):
        BKSTrial(1, 0.5, 0.5, 0, np.eye(1), np.eye(1))
    with pytest.raises(DataError):
        BKSTrial(2, 0.5, 1.0, 0, -np.eye(2), np.eye(2))
    with pytest.raises(DataError):
        BKSTrial(2, 0.5, 1.0, 0, np.eye(3), np.eye(2))


def test_trial_generation_is_reproducible():
    a, b = BKSTrial.generate(42), BKSTrial.generate(42)
    assert (a.n, a.s, a.gamma) == (b.n, b.s, b.gamma)
    np.testing.assert_array_equal(a.A, b.A)


@given(st.integers(0, 2 ** 31))
def test_bks_trial_holds(seed):
    r = evaluate_trial(BKSTrial.generate(seed))
    assert r["trace_ok"] and r["operator_ok"]


@given(st.integers(0, 2 ** 31))
def test_bks_invariant_under_orthogonal_conjugation(seed):
    t = BKSTrial.generate(seed, n_range=(2, 8))
    u = special_ortho_group.rvs(t.n, random_state=seed % (2 ** 32))
    c = BKSTrial(t.n, t.s, t.gamma, seed, u @ t.A @ u.T, u @ t.B @ u.T)
    a, b = evaluate_trial(t), evaluate_trial(c)
    scale = max(1.0, a["lhs"], a["rhs"])
    assert b["lhs"] == pytest.approx(a["lhs"], abs=1e-8 * scale)
    assert b["rhs"] == pytest.approx(a["rhs"], abs=1e-8 * scale)


@given(st.integers(0, 2 ** 31), st.floats(0.1, 10.0))
def test_bks_homogeneity(seed, c):
    # A, B -> cA, cB scales the left side by c^(s gamma), as the right side
    t = BKSTrial.generate(seed, n_range=(1, 6))
    ct = BKSTrial(t.n, t.s, t.gamma, seed, c * t.A, c * t.B)
    a, b = evaluate_trial(t), evaluate_trial(ct)
    f = c ** (t.s * t.gamma)
    assert b["rhs"] == pytest.approx(f * a["rhs"], rel=1e-9, abs=1e-12)
    assert b["lhs"] == pytest.approx(f * a["lhs"], rel=1e-6, abs=1e-9 * max(1, f * a["rhs"]))


def test_fuzz_runs_and_replays():
    reports = bks_fuzz(trials=40, seed=7)
    assert fuzz_summary(reports) == {"holds": 40, "violated": 0, "inconclusive": 0}
    again = bks_fuzz(trials=40, seed=7, workers=4)
    assert [r.to_json() for r in reports] == [r.to_json() for r in again]
    single = bks_fuzz(trials=1, seed=7 + 13)[0]
    assert single.to_json() == reports[13].to_json()


def test_fuzz_validation():
    with pytest.raises(DomainError):
        bks_fuzz(trials=1, s_range=(0.0, 0.5))
    with pytest.raises(DomainError):
        bks_fuzz(trials=1, gamma_range=(0.5, 2.0))
    with pytest.raises(ConfigurationError):
        bks_fuzz(trials=1, n_range=(3, 2))


def test_minimizer_shrinks_flagged_trials(monkeypatch):
    # with a negative slack every trial counts as a violation
    monkeypatch.setattr(bks_mod, "TRACE_SLACK", -10.0)
    t = BKSTrial.generate(3, n_range=(6, 6))
    m = minimize_counterexample(t)
    assert m.n == 1
    rep = bks_mod._report_for(t)
    assert rep.verdict == "violated" and rep.extra["counterexample"]["n"] == 1


def test_minimizer_returns_holding_trials_unchanged():
    t = BKSTrial.generate(5)
    assert minimize_counterexample(t) is t
