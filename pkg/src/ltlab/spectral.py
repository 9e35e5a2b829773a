"""Riesz means, counting-function integrals and strong-coupling scans."""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import lt_classical, rel_classical
from .errors import CompletenessError, DomainError, ResolutionWarning, TailError
from .numerics import Spectrum
from .specfun import gauss_legendre

__all__ = [
    "RieszMean",
    "riesz_mean",
    "riesz_via_counting",
    "certify",
    "WeylPoint",
    "weyl_scan",
    "weyl_builder",
    "weyl_grid",
    "surface_riesz_bs",
    "write_scan_csv",
    "SCAN_COLUMNS",
]


@dataclass(frozen=True)
class RieszMean:
    """A Riesz mean ``sum_j (-lambda_j)_+^gamma`` with its provenance.

    Attributes
    ----------
    gamma : float
    value : float
    eigencount : int
        Number of eigenvalues contributing.
    certificate : dict
        ``{"status": "converged" | "warning" | "unchecked", ...}`` plus
        resolution deltas or tail bounds.
    levels : ndarray
        ``-lambda_j`` for the contributing eigenvalues (jump locations when
        computed from a counting function), ascending.
    """

    gamma: float
    value: float
    eigencount: int
    certificate: dict = field(default_factory=lambda: {"status": "unchecked"})
    levels: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def converged(self):
        return self.certificate.get("status") == "converged"

    def with_certificate(self, cert):
        return RieszMean(self.gamma, self.value, self.eigencount, dict(cert), self.levels)


def riesz_mean(s, gamma, tau=0.0):
    """``tr[T + tau]_-^gamma`` from a spectrum of ``T``.

    Parameters
    ----------
    s : Spectrum
        Must contain every eigenvalue below ``-tau`` (complete, or covering).
    gamma : float
        ``gamma >= 0``; ``gamma = 0`` counts eigenvalues strictly below ``-tau``.
    tau : float
        Spectral shift.

    Raises
    ------
    CompletenessError
        If the spectrum may be missing eigenvalues below ``-tau``.
    """
    if gamma < 0 or not math.isfinite(gamma):
        raise DomainError(f"gamma must be >= 0, got {gamma!r}")
    if not s.includes_below(-tau):
        raise CompletenessError("spectrum is not certified to contain all eigenvalues "
                                f"below {-tau}")
    ev = np.asarray(s.eigenvalues)
    lev = np.sort(-(ev[ev < -tau] + tau))
    value = float(lev.size) if gamma == 0 else float(np.sum(lev ** gamma))
    return RieszMean(float(gamma), value, int(lev.size), {"status": "unchecked"}, lev)


def _locate_jumps(counter, a, b, na, nb, tol, cache, out):
    """Bisect [a, b] until every change of the non-increasing counter is
    bracketed within ``tol``; append (location, multiplicity)."""
    stack = [(a, b, na, nb)]
    while stack:
        a, b, na, nb = stack.pop()
        if na == nb:
            continue
        if na < nb:
            raise DomainError("counter must be non-increasing in tau")
        if b - a <= tol:
            out.append((0.5 * (a + b), na - nb))
            continue
        m = 0.5 * (a + b)
        if m not in cache:
            cache[m] = int(counter(m))
        nm = cache[m]
        stack.append((m, b, nm, nb))
        stack.append((a, m, na, nm))


def riesz_via_counting(counter, gamma, rule=None, tau_max=None, tau_min=0.0, tol=1e-8):
    """``gamma * int_0^inf N(tau) tau^(gamma-1) dtau`` for a counting function.

    ``counter(tau)`` returns the number of eigenvalues below ``-tau``; it is
    a non-increasing step function. Its jumps are located by bisection to
    ``tol`` and the integral is done panel by panel between jumps, where the
    counter is constant; on each panel the substitution ``w = tau^gamma``
    removes the endpoint singularity of the weight.

    Parameters
    ----------
    counter : callable
    gamma : float
        ``gamma > 0``. (For ``tr[H]_-^(g/2)`` pass ``gamma = g/2``.)
    rule : QuadratureRule, optional
        Panel rule, default Gauss-Legendre of order 8.
    tau_max : float
        ``counter(tau_max)`` must be 0.
    tau_min : float
        Lower end of the resolved range. If positive, eigenvalues in
        ``(-tau_min, 0)`` are not seen; the certificate records the tail
        bound ``tau_min^gamma`` per such eigenvalue and the count there.
    tol : float
        Jump location tolerance.

    Raises
    ------
    TailError
        If ``counter(tau_max) > 0``.
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma!r}")
    if tau_max is None or not tau_max > tau_min:
        raise DomainError("need tau_max > tau_min")
    rule = rule or gauss_legendre(8)
    n_top = int(counter(tau_max))
    if n_top > 0:
        raise TailError(f"counter({tau_max}) = {n_top} > 0; raise tau_max")
    n_bottom = int(counter(tau_min))
    cache = {tau_min: n_bottom, tau_max: n_top}
    jumps = []
    _locate_jumps(counter, tau_min, tau_max, n_bottom, n_top, tol, cache, jumps)
    jumps.sort()
    # panels [t_{k-1}, t_k] with constant count
    edges = [tau_min] + [t for t, _ in jumps]
    counts = []
    c = n_bottom
    for _, m in jumps:
        counts.append(c)
        c -= m
    value = 0.0
    for (a, b), cnt in zip(zip(edges[:-1], edges[1:]), counts):
        if cnt == 0:
            continue
        wa, wb = a ** gamma, b ** gamma
        w, wt = rule.scaled(wa, wb)
        value += cnt * float(np.sum(wt))
    if tau_min > 0 and n_bottom > 0:
        # the counter is at least n_bottom on [0, tau_min]
        value += n_bottom * tau_min ** gamma
    levels = np.repeat([t for t, _ in jumps], [m for _, m in jumps])
    # each jump is known to within tol / 2 of its midpoint
    err = sum(m * abs((t + 0.5 * tol) ** gamma - max(t - 0.5 * tol, 0.0) ** gamma)
              for t, m in jumps)
    cert = {
        "status": "converged",
        "error": float(err),
        "jump_tol": tol,
        "evaluations": len(cache),
    }
    if tau_min > 0:
        cert["tail_tau_min"] = tau_min
        cert["tail_per_missed_eigenvalue"] = tau_min ** gamma
    return RieszMean(float(gamma), float(value), int(n_bottom), cert, np.asarray(levels, float))


def certify(compute, base, variants, rtol=1e-3, atol=1e-10):
    """Evaluate ``compute`` at a base resolution and at refinements.

    Parameters
    ----------
    compute : callable
        ``compute(resolution) -> float``.
    base : object
        Base resolution.
    variants : dict
        ``name -> resolution`` refinements (e.g. doubled modes, larger box).
    rtol, atol : float
        Acceptance: every refinement changes the value by at most
        ``atol + rtol * |base value|``.

    Returns
    -------
    value : float
        The base value.
    certificate : dict
        ``status`` is ``converged`` or ``warning``; ``deltas`` maps each
        variant to its change; ``error`` is the largest change.
    """
    v0 = float(compute(base))
    deltas = {}
    values = {}
    for name, res in variants.items():
        v = float(compute(res))
        values[name] = v
        deltas[name] = v - v0
    err = max((abs(x) for x in deltas.values()), default=0.0)
    ok = err <= atol + rtol * abs(v0)
    return v0, {"status": "converged" if ok else "warning", "deltas": deltas,
                "values": values, "error": err, "rtol": rtol}


# ---------------------------------------------------------------------------
# strong-coupling scans

SCAN_COLUMNS = ("alpha", "gamma", "d", "kind", "riesz", "classical_rhs", "ratio", "converged")


@dataclass(frozen=True)
class WeylPoint:
    """One point of a strong-coupling scan."""

    alpha: float
    gamma: float
    d: int
    kind: str
    riesz: float
    classical_rhs: float
    ratio: float
    converged: bool
    certificate: dict = field(default_factory=dict, compare=False)

    def exceeds(self, factor):
        """Whether the Riesz mean exceeds ``factor`` times the classical
        value by more than its certified error (converged points only)."""
        err = self.certificate.get("error", 0.0)
        return self.converged and self.riesz > factor * self.classical_rhs + err


def _riesz_from_build(built, gamma):
    from .operators import DiscreteOperator, negative_spectrum

    if isinstance(built, RieszMean):
        return built
    if isinstance(built, DiscreteOperator):
        return riesz_mean(negative_spectrum(built), gamma)
    if isinstance(built, Spectrum):
        return riesz_mean(built, gamma)
    raise TypeError(f"builder returned unsupported {type(built).__name__}")


def surface_riesz_bs(p, g, gamma, tau_min_rel=1e-9, tol_rel=1e-7):
    """``tr[H(v)]_-^gamma`` from the Birman-Schwinger counting function on
    the periodic box ``g`` (d = 1).

    The counter is resolved on ``[tau_min, max v^2]`` with
    ``tau_min = tau_min_rel * max v^2``. Eigenvalues in ``(-tau_min, 0)``
    are counted with the direct relativistic route at ``tau = 0`` (on the
    same box, or on a coarser one under the dense cap) and contribute at
    most ``tau_min^gamma`` each; that bound is added to the certificate
    error.
    """
    from .operators import DENSE_MODE_CAP, BoxGrid, surface_count

    peak2 = p.peak ** 2
    if peak2 == 0:
        return RieszMean(float(gamma), 0.0, 0, {"status": "converged", "error": 0.0})
    tau_max = peak2 * (1 + 1e-9)
    tau_min = tau_min_rel * peak2
    rm = riesz_via_counting(lambda t: surface_count(p, g, t), gamma, tau_max=tau_max,
                            tau_min=tau_min, tol=tol_rel * peak2)
    g0 = g if g.modes <= DENSE_MODE_CAP[g.d] else BoxGrid(g.d, g.half_length,
                                                           DENSE_MODE_CAP[g.d])
    missed = max(surface_count(p, g0, 0.0) - rm.eigencount, 0)
    cert = dict(rm.certificate)
    cert["tail_missed"] = missed
    cert["error"] = cert["error"] + missed * tau_min ** gamma
    return rm.with_certificate(cert)


def weyl_grid(kind, p, alpha, L=None, M=None):
    """Default box for scan point ``alpha``.

    Relativistic: ``L = 10``, ``M = 512``. Surface (Birman-Schwinger
    counting, no dense cap): ``L = 40`` and ``M = max(512, 256 alpha max v)``
    rounded up to a power of two, which keeps the spacing below the
    oscillation length ``1 / (alpha max v)``.
    """
    from .operators import BoxGrid

    if kind == "relativistic":
        return BoxGrid(p.d, L or 10.0, M or 512)
    if M is None:
        need = 256 * alpha * p.with_coupling(1.0).peak
        M = 512
        while M < need:
            M *= 2
    return BoxGrid(p.d, L or 40.0, M)


def weyl_builder(kind, p, gamma, grid_for, rtol=2e-2, refine=True):
    """Builder for :func:`weyl_scan` returning certified Riesz means.

    Parameters
    ----------
    kind : {"surface", "relativistic"}
        ``surface``: ``tr[H(alpha v)]_-^gamma`` by :func:`surface_riesz_bs`;
        ``relativistic``: ``tr[sqrt(-Delta) - alpha v]_-^gamma`` from the
        dense box matrix.
    p : Potential
        Profile; the builder sets its coupling to ``alpha``.
    grid_for : callable
        ``alpha -> BoxGrid``.
    rtol : float
        Certificate tolerance for the refined (2x modes, capped for dense
        matrices) and enlarged (1.5x box) recomputations.
    """
    from .operators import DENSE_MODE_CAP, BoxGrid, negative_spectrum, relativistic_matrix

    if kind not in ("surface", "relativistic"):
        raise DomainError(f"kind must be 'surface' or 'relativistic', got {kind!r}")

    def variants(g):
        cap = DENSE_MODE_CAP[g.d] if kind == "relativistic" else None
        fine = 2 * g.modes if cap is None else min(2 * g.modes, cap)
        wide = int(round(1.5 * g.modes / 2)) * 2
        out = {}
        if fine > g.modes:
            out["refined"] = BoxGrid(g.d, g.half_length, fine)
        if cap is None or wide <= cap:
            out["enlarged"] = BoxGrid(g.d, g.half_length * wide / g.modes, wide)
        return out

    def build(alpha):
        q = p.with_coupling(alpha)
        g = grid_for(alpha)
        if kind == "surface":
            def compute(gg):
                return surface_riesz_bs(q, gg, gamma)
        else:
            def compute(gg):
                return riesz_mean(negative_spectrum(relativistic_matrix(q, gg)), gamma)
        base = compute(g)
        if not refine:
            return base
        value, cert = certify(lambda gg: base.value if gg is g else compute(gg).value, g,
                              variants(g), rtol=rtol)
        cert["error"] = cert["error"] + base.certificate.get("error", 0.0)
        cert["grid"] = g.describe()
        return base.with_certificate(cert)

    return build


def weyl_scan(builder, gamma, alphas, norm_integral, kind, d=1, workers=1):
    """Ratios ``alpha^(-p) tr[.]_-^gamma / (C^cl * norm_integral)``.

    Parameters
    ----------
    builder : callable
        ``builder(alpha)`` returning a DiscreteOperator, a Spectrum or a
        ready RieszMean (which may carry a convergence certificate).
    gamma : float
    alphas : sequence of float
        Increasing couplings.
    norm_integral : float
        ``int v^(2 gamma + d)`` (surface) or ``int v^(gamma + d)``
        (relativistic), from the closed form.
    kind : {"surface", "relativistic"}
    d : int
    workers : int
        Thread pool size; results keep the order of ``alphas``.

    Warns
    -----
    ResolutionWarning
        For each point whose Riesz mean is not certified as converged.
    """
    alphas = [float(a) for a in alphas]
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise DomainError("alphas must be increasing")
    if kind == "surface":
        p, ccl = 2 * gamma + d, lt_classical(gamma, d)
    elif kind == "relativistic":
        p, ccl = gamma + d, rel_classical(gamma, d)
    else:
        raise DomainError(f"kind must be 'surface' or 'relativistic', got {kind!r}")

    def one(alpha):
        return _riesz_from_build(builder(alpha), gamma)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            means = list(pool.map(one, alphas))
    else:
        means = [one(a) for a in alphas]
    out = []
    for alpha, rm in zip(alphas, means):
        rhs = ccl * norm_integral * alpha ** p
        ratio = rm.value / rhs if rhs > 0 else math.inf
        conv = rm.converged
        if not conv:
            warnings.warn(ResolutionWarning(
                f"Riesz mean at alpha={alpha} is not certified converged "
                f"({rm.certificate.get('status')})"), stacklevel=2)
        out.append(WeylPoint(alpha, float(gamma), d, kind, rm.value, rhs, ratio, conv,
                             dict(rm.certificate)))
    return out


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_scan_csv(points, stream=None):
    """Write scan points with the columns of ``SCAN_COLUMNS``."""
    own = stream is None
    if own:
        stream = io.StringIO()
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for pt in points:
        w.writerow([_fmt(getattr(pt, c)) for c in SCAN_COLUMNS])
    return stream.getvalue() if own else None
