"""Numerical checks of Lieb-Thirring type inequalities.

Every checker computes the spectral side from a discretization and the
potential side from the closed-form integrals of :mod:`ltlab.potentials`,
so the two sides never share a grid. Spectral quantities are re-computed
on a refined and on an enlarged grid; the largest change is the error
estimate that enters the verdict (see :func:`~ltlab.inequalities.report.decide`).
"""
from __future__ import annotations

import math

import numpy as np

from .. import constants as C
from ..errors import ConfigurationError, DomainError, NoBoundError
from ..numerics import inertia_below
from ..operators import (
    DENSE_MODE_CAP,
    BoxGrid,
    HalfSpaceGrid,
    birman_schwinger_from_values,
    birman_schwinger_matrix,
    count_above_one,
    negative_spectrum,
    relativistic_matrix,
    robin_halfline_matrix,
    robin_halfspace_matrix,
    waveguide_riesz_exact,
)
from ..potentials import Potential
from ..spectral import certify, riesz_mean, riesz_via_counting
from .report import InequalityReport, combine_verdicts, decide

__all__ = [
    "sobolev_quotient",
    "default_halfspace_grid",
    "default_box_grid",
    "check_surface_lt",
    "check_sharp_shifted",
    "check_relativistic_lt",
    "check_duality_sandwich",
    "check_massive",
    "check_waveguide",
    "lower_bound_certificate",
]

DEFAULT_RTOL = 2e-2

_REF_SURFACE = "surface Lieb-Thirring inequality tr[H(v)]_-^g <= S_{g,d} int v^(2g+d)"
_REF_SHARP = "sharp shifted inequality tr[H(v)+tau]_-^g <= L^cl_{g,d} int (v^2-tau)_+^(g+d/2), g>=3/2"
_REF_REL = "relativistic Lieb-Thirring inequality tr[sqrt(-Delta)-v]_-^g <= D_{g,d} int v^(g+d)"
_REF_SANDWICH = ("moment duality tr[sqrt(-Delta)-v]_-^g <= tr[H(v)]_-^(g/2) "
                 "<= (rho/sqrt(1-rho^2))^g tr[sqrt(-Delta)-v/rho]_-^g")
_REF_MASSIVE = ("massive relativistic count N(sqrt(-Delta+m^2)-m-v) "
                "<= c D^cl_{0,d} int ((v+m)^2-m^2)_+^(d/2)")
_REF_WAVEGUIDE = "interval waveguide tr[H_omega(v0)]_-^g <= L^cl_{g,1} |omega| v0^(2g+1)"
_REF_SOBOLEV = "sharp fractional Sobolev quotient ||(-Delta)^(1/4)u||^2 >= S'_d ||u||_(2d/(d-1))^2"


# ---------------------------------------------------------------------------
# grids and certified spectral quantities


def default_halfspace_grid(p):
    """Half-space grid resolving the boundary layer of width ``1/max v``.

    The domain is sized by the support of ``v``; shallow bound states of weak
    potentials extend further and are then flagged by the enlarged-domain
    certificate.
    """
    peak = max(p.peak, 1e-3)
    h = min(0.1, 0.2 / peak)
    X = p.support_radius(1e-10) + 2.0
    Y = min(X, 8.0)
    return HalfSpaceGrid(X, Y, int(math.ceil(2 * X / h)) - 1, int(math.ceil(Y / h)) - 1)


def default_box_grid(p, modes=None):
    """Periodic box for relativistic matrices: ``M = 512`` (d=1) or 24 (d=2).

    Refinement doubles ``M``, so the defaults leave room under the dense
    caps. Bound states of the massless operator decay only algebraically,
    hence the wide box in d = 1.
    """
    if p.d == 1:
        L = max(10.0, 2.0 * p.support_radius(1e-10))
    else:
        L = max(4.0, 1.5 * p.support_radius(1e-6))
    if modes is None:
        modes = 512 if p.d == 1 else 24
    return BoxGrid(p.d, L, modes)


def _variants(grid):
    """Refined and enlarged grids; box grids stay under the dense cap by
    using a smaller refinement or enlargement factor when needed."""
    if isinstance(grid, BoxGrid) and grid.d in DENSE_MODE_CAP:
        cap = DENSE_MODE_CAP[grid.d]
        m = grid.modes
        out = {}
        fine = min(2 * m, cap // 2 * 2)
        if fine > m:
            out["refined"] = BoxGrid(grid.d, grid.half_length, fine)
        wide = min(int(round(1.5 * m / 2)) * 2, cap // 2 * 2)
        if wide > m:
            out["enlarged"] = BoxGrid(grid.d, grid.half_length * wide / m, wide)
        return out
    return {"refined": grid.refined(2), "enlarged": grid.enlarged(1.5)}


def _certified(compute, grid, label, rtol, refine):
    if not refine:
        v = float(compute(grid))
        return v, {"quantity": label, "status": "unchecked", "error": 0.0,
                   "grid": grid.describe()}
    v, cert = certify(compute, grid, _variants(grid), rtol=rtol)
    cert["quantity"] = label
    cert["grid"] = grid.describe()
    return v, cert


def _riesz_of(build, gamma, tau=0.0):
    def compute(g):
        op = build(g)
        return riesz_mean(negative_spectrum(op, shift=-tau), gamma, tau).value
    return compute


def _inputs(p, gamma, d, tau, grid):
    return {"potential": None if p is None else str(p), "gamma": gamma, "d": d,
            "tau": tau, "grid": None if grid is None else grid.describe()}


def _require_d1(p):
    if not isinstance(p, Potential):
        raise ConfigurationError("expected a Potential")
    if p.d != 1:
        raise ConfigurationError("half-space checks take a potential on the line (d = 1)")


# ---------------------------------------------------------------------------
# surface inequalities


def check_surface_lt(p, gamma, grid=None, rtol=DEFAULT_RTOL, refine=True):
    """``tr[H(v)]_-^gamma <= S_{gamma,1} int v^(2 gamma + 1)`` on the half-plane.

    The spectral side comes from the Robin finite-difference operator on a
    truncated domain with Dirichlet walls, which can only lose negative
    eigenvalue mass; the factor is the best entry of the surface table.

    Raises
    ------
    NoBoundError
        For ``gamma = 0`` (no finite constant exists on the line).
    """
    _require_d1(p)
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    entry = C.surface_bound_table(gamma, 1)
    factor = entry.factor
    grid = grid or default_halfspace_grid(p)
    rhs = factor * C.lt_classical(gamma, 1) * p.lp_integral(2 * gamma + 1) if p.peak else 0.0
    if p.peak == 0:
        lhs, cert = 0.0, {"quantity": "tr[H(v)]_-^g", "status": "converged", "error": 0.0}
    else:
        lhs, cert = _certified(_riesz_of(lambda g: robin_halfspace_matrix(p, g), gamma),
                               grid, "tr[H(v)]_-^g", rtol, refine)
    conv = cert["status"] == "converged"
    cands = [{"factor": e.factor, "kind": e.kind, "source": e.source}
             for e in C.surface_bound_candidates(gamma, 1)]
    return InequalityReport(
        "surface-lt", _REF_SURFACE, lhs, rhs, factor,
        decide(lhs, rhs, cert["error"], conv), [cert], _inputs(p, gamma, 1, 0.0, grid),
        {"candidates": cands, "factor_source": entry.source})


def check_sharp_shifted(p, gamma, tau=0.0, grid=None, rtol=DEFAULT_RTOL, refine=True):
    """``tr[H(v) + tau]_-^gamma <= L^cl_{gamma,d} int (v^2 - tau)_+^(gamma + d/2)``.

    ``p`` is a :class:`Potential` on the line (half-plane problem) or a
    number ``v0`` for the half-line, where the right side reduces to
    ``(v0^2 - tau)_+^gamma``; ``grid`` is then ``(Y, ny)``.
    """
    if gamma < 1.5:
        raise NoBoundError("the sharp shifted inequality needs gamma >= 3/2")
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if not isinstance(p, Potential):
        v0 = float(p)
        if v0 < 0:
            raise DomainError("v0 must be >= 0")
        Y, ny = grid or (20.0, 400)
        rhs = max(v0 * v0 - tau, 0.0) ** gamma

        def compute(res):
            op = robin_halfline_matrix(v0, res[0], res[1])
            return riesz_mean(negative_spectrum(op, shift=-tau), gamma, tau).value

        variants = {"refined": (Y, 2 * ny + 1), "enlarged": (1.5 * Y, int(1.5 * ny))}
        lhs, cert = certify(compute, (Y, ny), variants, rtol=rtol)
        cert["quantity"] = "tr[H(v0)+tau]_-^g on the half-line"
        conv = cert["status"] == "converged"
        return InequalityReport(
            "sharp-shifted", _REF_SHARP, lhs, rhs, 1.0, decide(lhs, rhs, cert["error"], conv),
            [cert], {"potential": f"constant:{v0:.17g}", "gamma": gamma, "d": 0, "tau": tau,
                     "grid": {"kind": "halfline", "Y": Y, "ny": ny}})
    _require_d1(p)
    grid = grid or default_halfspace_grid(p)
    rhs = C.lt_classical(gamma, 1) * p.shifted_integral(tau, gamma + 0.5)
    if p.peak ** 2 <= tau:
        lhs, cert = 0.0, {"quantity": "tr[H(v)+tau]_-^g", "status": "converged",
                          "error": 0.0, "note": "tau >= max v^2"}
    else:
        lhs, cert = _certified(_riesz_of(lambda g: robin_halfspace_matrix(p, g), gamma, tau),
                               grid, "tr[H(v)+tau]_-^g", rtol, refine)
    conv = cert["status"] == "converged"
    return InequalityReport(
        "sharp-shifted", _REF_SHARP, lhs, rhs, 1.0, decide(lhs, rhs, cert["error"], conv),
        [cert], _inputs(p, gamma, 1, tau, grid))


# ---------------------------------------------------------------------------
# relativistic inequalities

_IMPROVED = (
    (2, 2.0, 3.0, math.sqrt(3) * math.pi, "sqrt(3) pi"),
    (2, 3.0, math.inf, 4.0, "4"),
    (3, 3.0, math.inf, 15 * math.pi / 8, "15 pi / 8"),
)


def check_relativistic_lt(p, gamma, grid=None, rtol=DEFAULT_RTOL, refine=True):
    """``tr[sqrt(-Delta) - v]_-^gamma <= D_{gamma,d} int v^(gamma + d)``.

    ``D_{gamma,d}`` is the best tabulated factor times ``D^cl_{gamma,d}``.
    ``extra`` lists every applicable candidate, the improved factors for
    large ``gamma`` and the ratio against ``D^cl`` alone.

    Raises
    ------
    NoBoundError
        For ``gamma = 0, d = 1`` and outside the tabulated windows.
    """
    if not isinstance(p, Potential):
        raise ConfigurationError("expected a Potential")
    d = p.d
    entry = C.relativistic_bound_table(gamma, d)
    factor = entry.factor
    grid = grid or default_box_grid(p)
    dcl = C.rel_classical(gamma, d)
    weyl = dcl * p.lp_integral(gamma + d) if p.peak else 0.0
    rhs = factor * weyl
    if p.peak == 0:
        lhs, cert = 0.0, {"quantity": "tr[sqrt(-Delta)-v]_-^g", "status": "converged",
                          "error": 0.0}
    else:
        lhs, cert = _certified(_riesz_of(lambda g: relativistic_matrix(p, g), gamma),
                               grid, "tr[sqrt(-Delta)-v]_-^g", rtol, refine)
    conv = cert["status"] == "converged"
    improved = [{"factor": f, "label": lab, "window": [lo, hi]}
                for dd, lo, hi, f, lab in _IMPROVED if dd == d and lo <= gamma < hi]
    extra = {
        "candidates": [{"factor": e.factor, "kind": e.kind, "source": e.source}
                       for e in C.relativistic_bound_candidates(gamma, d)],
        "factor_source": entry.source,
        "improved_factors": improved,
        "ratio_classical": lhs / weyl if weyl > 0 else 0.0,
    }
    return InequalityReport(
        "relativistic-lt", _REF_REL, lhs, rhs, factor, decide(lhs, rhs, cert["error"], conv),
        [cert], _inputs(p, gamma, d, 0.0, grid), extra)


def _surface_counter(p, g):
    """``tau -> N(-tau, H(v))`` through the duality with the relativistic
    operator: the Birman-Schwinger count for ``tau > 0`` and the direct
    inertia at ``tau = 0``."""
    def counter(tau):
        if tau == 0:
            return inertia_below(relativistic_matrix(p, g).matrix, 0.0)
        return count_above_one(birman_schwinger_matrix(p, g, tau))[0]
    return counter


def check_duality_sandwich(p, gamma, rho=None, grid=None, rtol=DEFAULT_RTOL, refine=True,
                           tol=1e-8):
    """Both inequalities of the moment duality on one periodic box.

    The left and right terms are Riesz means of relativistic matrices; the
    middle term ``tr[H(v)]_-^(gamma/2)`` is integrated from the counting
    function ``N(-tau, H(v)) = N(sqrt(-Delta + tau) - v)``. On a common
    box the chain holds exactly for the discrete operators, so the check
    tests the pipeline as well as the statement.

    Parameters
    ----------
    rho : float, optional
        In ``(0, 1]``; defaults to the value minimizing the right factor
        in the strong-coupling limit. At ``rho = 1`` the right side is
        infinite and that inequality holds trivially.
    """
    if not isinstance(p, Potential):
        raise ConfigurationError("expected a Potential")
    if not gamma > 0:
        raise DomainError("the moment duality needs gamma > 0")
    if rho is None:
        rho = C.optimal_rho(gamma, p.d)[0]
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho!r}")
    grid = grid or default_box_grid(p)
    d = p.d
    inputs = _inputs(p, gamma, d, 0.0, grid)
    inputs["rho"] = rho
    if p.peak == 0:
        z = {"status": "converged", "error": 0.0}
        return InequalityReport("duality-sandwich", _REF_SANDWICH, 0.0, 0.0, 0.0, "holds",
                                [dict(z, quantity=q) for q in ("left", "middle", "right")],
                                inputs, {"left": 0.0, "middle": 0.0, "right": 0.0,
                                         "left_verdict": "holds", "right_verdict": "holds"})
    left, c_left = _certified(_riesz_of(lambda g: relativistic_matrix(p, g), gamma), grid,
                              "tr[sqrt(-Delta)-v]_-^g", rtol, refine)
    tau_max = p.peak ** 2 * (1 + 1e-9) + 1e-12

    def middle_of(g):
        return riesz_via_counting(_surface_counter(p, g), gamma / 2, tau_max=tau_max,
                                  tol=tol).value

    middle, c_mid = _certified(middle_of, grid, "tr[H(v)]_-^(g/2) from N(-tau, H(v))",
                               rtol, refine)
    c_mid["jump_error"] = riesz_via_counting(_surface_counter(p, grid), gamma / 2,
                                             tau_max=tau_max, tol=tol).certificate["error"]
    err_mid = c_mid["error"] + c_mid["jump_error"]
    if rho >= 1.0:
        factor, right, c_right = math.inf, math.inf, {
            "quantity": "right", "status": "converged", "error": 0.0,
            "note": "rho = 1: infinite factor, holds trivially"}
    else:
        factor = C.duality_factor(gamma, rho)
        q = p.scaled(1.0 / rho)
        rel, c_right = _certified(_riesz_of(lambda g: relativistic_matrix(q, g), gamma), grid,
                                  "tr[sqrt(-Delta)-v/rho]_-^g", rtol, refine)
        right = factor * rel
        c_right["error"] *= factor
    conv_left = c_left["status"] == "converged" and c_mid["status"] == "converged"
    conv_right = c_mid["status"] == "converged" and c_right["status"] == "converged"
    v_left = decide(left, middle, c_left["error"] + err_mid, conv_left)
    v_right = decide(middle, right, err_mid + c_right["error"], conv_right)
    verdict = combine_verdicts([v_left, v_right])
    extra = {"left": left, "middle": middle, "right": right,
             "left_verdict": v_left, "right_verdict": v_right}
    return InequalityReport("duality-sandwich", _REF_SANDWICH, middle, right, factor, verdict,
                            [c_left, c_mid, c_right], inputs, extra)


def check_massive(p, m, grid=None, refine=True):
    """Massive count bound, checked in d = 2 as a consistency exercise.

    The count ``N(sqrt(-Delta + m^2) - m - v)`` is compared with
    ``c D^cl_{0,2} int ((v + m)^2 - m^2)_+`` where ``c`` is the tabulated
    two-dimensional count factor. The count is computed twice: directly by
    inertia, and as the number of Birman-Schwinger eigenvalues above 1 at
    ``tau = m^2`` for the potential ``v + m``; the two agree exactly.
    """
    if not isinstance(p, Potential):
        raise ConfigurationError("expected a Potential")
    if p.d != 2:
        raise ConfigurationError("the massive check runs in d = 2")
    if m < 0:
        raise DomainError("m must be >= 0")
    if grid is None:
        # the box must be long enough to see frequencies of order m
        grid = default_box_grid(p)
        if m > 0 and m < 1.05 * math.pi / grid.half_length:
            L = 1.05 * math.pi / m
            grid = BoxGrid(2, L, min(32, 2 * int(math.ceil(L / 0.4))))
    factor = C.relativistic_bound_table(0.0, 2).factor
    rhs = factor * C.rel_classical(0.0, 2) * (p.lp_integral(2) + 2 * m * p.lp_integral(1)) \
        if p.peak else 0.0
    notes = []

    def counts(g):
        direct = inertia_below(relativistic_matrix(p, g, tau=m * m, offset=m).matrix, 0.0)
        if m > 0:
            vals = p(*g.mesh()) + m
            bs = count_above_one(birman_schwinger_from_values(g, vals, m * m, p))[0]
        else:
            bs = None
        return direct, bs

    direct, bs = counts(grid)
    cert = {"quantity": "N(sqrt(-Delta+m^2)-m-v)", "direct": direct, "bs_count": bs,
            "grid": grid.describe()}
    ok = bs is None or bs == direct
    if refine:
        for name, g in _variants(grid).items():
            dv, bv = counts(g)
            cert[name] = dv
            ok = ok and dv == direct and (bv is None or bv == dv)
    if 0 < m < math.pi / grid.half_length:
        notes.append("m^2 is below the lowest nonzero box frequency squared")
        ok = False
    cert["status"] = "converged" if ok else "warning"
    cert["error"] = 0.0
    if notes:
        cert["notes"] = notes
    lhs = float(direct)
    inputs = _inputs(p, 0.0, 2, m * m, grid)
    inputs["m"] = m
    return InequalityReport(
        "massive", _REF_MASSIVE, lhs, rhs, factor, decide(lhs, rhs, 0.0, ok), [cert], inputs,
        {"factor_used": f"{factor:.17g} (d=2 count factor)", "exercise": "d=2 consistency"})


# ---------------------------------------------------------------------------
# exactly solvable and Sobolev checks


def check_waveguide(L_omega, v0, gamma, k_max=None):
    """Dirichlet interval waveguide: exact Riesz mean against the classical
    bound ``L^cl_{gamma,1} L_omega v0^(2 gamma + 1)``; valid for all
    ``gamma >= 0`` since intervals tile the line."""
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    if k_max is None:
        k_max = int(math.ceil(v0 * L_omega / math.pi)) + 1
    lhs = waveguide_riesz_exact(L_omega, v0, gamma, k_max)
    rhs = C.lt_classical(gamma, 1) * L_omega * v0 ** (2 * gamma + 1)
    cert = {"quantity": "exact mode sum", "status": "converged", "error": 0.0, "k_max": k_max}
    return InequalityReport(
        "waveguide", _REF_WAVEGUIDE, lhs, rhs, 1.0, decide(lhs, rhs, 1e-12 * rhs, True), [cert],
        {"potential": f"constant:{v0:.17g}", "gamma": gamma, "d": 1, "tau": 0.0,
         "grid": {"kind": "interval", "L_omega": L_omega}})


def sobolev_quotient(u, g):
    """``||(-Delta)^(1/4) u||^2 / ||u||_q^2`` with ``q = 2d/(d-1)`` for grid
    samples ``u`` on the periodic box ``g`` (spectral derivative)."""
    d = g.d
    u = np.asarray(u, dtype=float).reshape((g.modes,) * d)
    cell = g.h ** d
    uh = np.fft.fftn(u)
    kin = cell / u.size * float(np.sum(np.sqrt(g.symbol_grid()) * np.abs(uh) ** 2))
    q = 2 * d / (d - 1)
    norm = (cell * float(np.sum(np.abs(u) ** q))) ** (2 / q)
    return kin / norm


def lower_bound_certificate(d, grid=None, trial=None, rtol=1e-3):
    """Sobolev quotient of a trial function against the sharp constant.

    The quotient is bounded below by ``S'_d`` for every trial function; the
    implied lower bound on the count factor is ``S'_d^(-d) / D^cl_{0,d}``
    (:func:`ltlab.constants.daubechies_lower_factor`). A quotient below
    ``S'_d`` beyond the refinement error is reported as ``violated`` and
    indicates a discretization bug.
    """
    if d not in (2, 3):
        raise ConfigurationError("the certificate is computed for d = 2 or 3")
    trial = trial or Potential.gaussian(1.0, 1.0, d=d)
    if trial.d != d:
        raise ConfigurationError("trial profile dimension must equal d")
    if grid is None:
        grid = BoxGrid(d, (16.0 if d == 2 else 12.0) * trial.scale, 128 if d == 2 else 64)
    s_prime = C.sobolev_trace_constant(d)

    def compute(g):
        return sobolev_quotient(trial(*g.mesh()), g)

    quotient, cert = certify(compute, grid, _variants(grid), rtol=rtol)
    cert["quantity"] = "Sobolev quotient"
    cert["grid"] = grid.describe()
    conv = cert["status"] == "converged"
    # the inequality is S'_d <= quotient
    verdict = decide(s_prime, quotient, cert["error"], conv)
    factor = C.daubechies_lower_factor(d)
    return InequalityReport(
        "lower-bound-certificate", _REF_SOBOLEV, s_prime, quotient, factor, verdict, [cert],
        {"potential": str(trial), "gamma": 0.0, "d": d, "tau": 0.0, "grid": grid.describe()},
        {"implied_lower_factor": factor, "quotient": quotient, "sobolev_constant": s_prime})

