"""Semiclassical constants, tabulated bound factors and scalar identities.

Bound factors are stored as multiples of the semiclassical constant together
with an explicit validity window and a source tag, so that reports can say
which number was used and why.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoBoundError
from .specfun import beta_fn, gamma_fn, gauss_legendre, lgamma_fn

__all__ = [
    "ConstantQuery",
    "BoundEntry",
    "lt_classical",
    "rel_classical",
    "sobolev_trace_constant",
    "daubechies_lower_factor",
    "surface_bound_table",
    "surface_bound_candidates",
    "surface_lower_bounds",
    "relativistic_bound_table",
    "relativistic_bound_candidates",
    "relativistic_lower_bounds",
    "delta_plane_constant",
    "optimal_rho",
    "duality_factor",
    "aizenman_lieb_identity",
    "constant_rows",
    "dump_constants_csv",
    "CSV_COLUMNS",
]


@dataclass(frozen=True)
class ConstantQuery:
    """A (gamma, d) pair: Riesz exponent and boundary dimension.

    ``d = 0`` is accepted for the half-line base case only; the table
    lookups require ``d >= 1``.
    """

    gamma: float
    d: int

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or g < 0:
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 0:
            raise DomainError(f"d must be a non-negative integer, got {self.d!r}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "d", int(self.d))


def _query(q, d=None, *, min_d=1):
    if not isinstance(q, ConstantQuery):
        q = ConstantQuery(q, d)
    if q.d < min_d:
        raise DomainError(f"d must be >= {min_d}, got {q.d}")
    return q


@dataclass(frozen=True)
class BoundEntry:
    """A tabulated bound ``sharp constant <= factor * classical constant``
    (or ``>=`` for lower bounds).

    Attributes
    ----------
    factor : float
        Multiple of the classical constant.
    window : str
        Human-readable validity condition on (gamma, d).
    kind : str
        ``"upper"``, ``"lower"`` or ``"sharp"``.
    source : str
        Where the number comes from.
    """

    factor: float
    window: str
    kind: str
    source: str

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError("factor must be positive")
        if self.kind not in ("upper", "lower", "sharp"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "sharp" and self.factor != 1.0:
            raise ValueError("sharp entries have factor exactly 1")


# ---------------------------------------------------------------------------
# closed-form constants


def lt_classical(q, d=None):
    """Semiclassical surface constant
    ``L^cl_{g,d} = 2^-d pi^(-d/2) Gamma(g+1) / Gamma(g+d/2+1)``.

    Accepts a :class:`ConstantQuery` or ``(gamma, d)``; ``d = 0`` gives 1.
    """
    q = _query(q, d, min_d=0)
    g, dd = q.gamma, q.d
    if g + dd / 2 + 1 < 150:
        ratio = gamma_fn(g + 1) / gamma_fn(g + dd / 2 + 1)
    else:
        ratio = math.exp(lgamma_fn(g + 1) - lgamma_fn(g + dd / 2 + 1))
    return 2.0 ** (-dd) * math.pi ** (-dd / 2) * ratio


def rel_classical(q, d=None):
    """Semiclassical relativistic constant
    ``D^cl_{g,d} = 2^-d pi^(-d/2) Gamma(g+1) Gamma(d+1) / (Gamma(g+d+1) Gamma(d/2+1))``.
    """
    q = _query(q, d)
    g, dd = q.gamma, q.d
    if g + dd + 1 < 150:
        ratio = gamma_fn(g + 1) * gamma_fn(dd + 1) / (gamma_fn(g + dd + 1) * gamma_fn(dd / 2 + 1))
    else:
        ratio = math.exp(lgamma_fn(g + 1) + lgamma_fn(dd + 1)
                         - lgamma_fn(g + dd + 1) - lgamma_fn(dd / 2 + 1))
    return 2.0 ** (-dd) * math.pi ** (-dd / 2) * ratio


def _check_dim2(d):
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    return int(d)


def sobolev_trace_constant(d, use_log=False):
    """Sharp constant ``S'_d`` of the Sobolev inequality
    ``||(-Delta)^(1/4) u||^2 >= S'_d ||u||^2_{2d/(d-1)}`` on R^d.

    ``use_log`` evaluates through log-Gamma instead (an independent path).
    """
    d = _check_dim2(d)
    if use_log:
        log_s = (math.log((d - 1) / 2) + math.log(2.0) / d
                 + (d + 1) / (2 * d) * math.log(math.pi) - lgamma_fn((d + 1) / 2) / d)
        return math.exp(log_s)
    return ((d - 1) / 2) * 2.0 ** (1.0 / d) * math.pi ** ((d + 1) / (2 * d)) \
        * gamma_fn((d + 1) / 2) ** (-1.0 / d)


def daubechies_lower_factor(d):
    """Lower-bound factor ``2^(d-1) Gamma(d+1) / (d-1)^d`` on ``D_{0,d} / D^cl_{0,d}``.

    Exceeds 1 exactly for ``2 <= d <= 7``.
    """
    d = _check_dim2(d)
    return 2.0 ** (d - 1) * gamma_fn(d + 1) / (d - 1) ** d


# ---------------------------------------------------------------------------
# surface bound table

_SRC_WEYL = "strong-coupling (Weyl) limit"
_SRC_SHARP = "dimension lifting with sharp operator-valued LT, gamma>=3/2"
_SRC_OPV1 = "operator-valued LT with extra factor pi/sqrt(3), gamma>=1"
_SRC_OPV2 = "operator-valued LT with extra factor 2, 1/2<=gamma<1, d=1"
_SRC_OPV3 = "operator-valued LT with extra factor 2pi/sqrt(3), gamma>=1/2, d>=2"
_SRC_DAUB2 = "relativistic count bound 6.04 (d=2) via eigenvalue-count duality"
_SRC_DAUB3 = "relativistic count bound (d=3) via eigenvalue-count duality"
_SRC_OPVCLR = "operator-valued CLR bound 10.332, d>=3"
_SRC_SOBOLEV = "sharp fractional Sobolev inequality trial potential"
_SRC_AL = "Aizenman-Lieb lifting of a surface bound via duality"
_SRC_DUAL = "surface bound at gamma/2 via the moment duality"


def surface_bound_candidates(q, d=None):
    """All tabulated upper bounds on ``S_{g,d} / L^cl_{g,d}`` valid at (g, d)."""
    q = _query(q, d)
    g, dd = q.gamma, q.d
    out = []
    if g >= 1.5:
        out.append(BoundEntry(1.0, "gamma>=3/2", "sharp", _SRC_SHARP))
    if g >= 1.0:
        out.append(BoundEntry(math.pi / math.sqrt(3), "gamma>=1", "upper", _SRC_OPV1))
    if g >= 0.5 and dd == 1:
        out.append(BoundEntry(2.0, "gamma>=1/2, d=1", "upper", _SRC_OPV2))
    if g >= 0.5 and dd >= 2:
        out.append(BoundEntry(2 * math.pi / math.sqrt(3), "gamma>=1/2, d>=2", "upper", _SRC_OPV3))
    if g == 0.0:
        if dd == 2:
            out.append(BoundEntry(6.04, "gamma=0, d=2", "upper", _SRC_DAUB2))
        elif dd == 3:
            out.append(BoundEntry(6.07, "gamma=0, d=3", "upper", _SRC_DAUB3))
        if dd >= 3:
            out.append(BoundEntry(10.332, "gamma=0, d>=3", "upper", _SRC_OPVCLR))
    return out


def surface_bound_table(q, d=None):
    """Best tabulated upper bound on ``S_{g,d} / L^cl_{g,d}``.

    Returns
    -------
    BoundEntry
        Factor 1 (``kind="sharp"``) for gamma >= 3/2; pi/sqrt(3) for
        1 <= gamma < 3/2; 2 (d=1) or 2pi/sqrt(3) (d>=2) for 1/2 <= gamma < 1;
        6.04, 6.07 and 10.332 for gamma = 0 and d = 2, 3, >= 4.

    Raises
    ------
    NoBoundError
        At gamma = 0, d = 1 no inequality of this form holds; for the other
        uncovered cases no constant is tabulated.
    """
    q = _query(q, d)
    cands = surface_bound_candidates(q)
    if not cands:
        if q.gamma == 0.0 and q.d == 1:
            raise NoBoundError(
                "no surface Lieb-Thirring inequality holds at gamma=0, d=1: "
                "it requires gamma>0 when d=1"
            )
        raise NoBoundError(f"no tabulated surface constant for gamma={q.gamma}, d={q.d}")
    return min(cands, key=lambda e: e.factor)


def surface_lower_bounds(q, d=None):
    """Lower bounds on ``S_{g,d} / L^cl_{g,d}``: the Weyl bound and, at
    gamma = 0 and 2 <= d <= 7, the Sobolev-based factor (4 at d=2, 3 at d=3)."""
    q = _query(q, d)
    out = [BoundEntry(1.0, "all gamma, d", "lower", _SRC_WEYL)]
    if q.gamma == 0.0 and 2 <= q.d <= 7:
        out.append(BoundEntry(daubechies_lower_factor(q.d), "gamma=0, 2<=d<=7", "lower", _SRC_SOBOLEV))
    return out


def delta_plane_constant(q, d=None):
    """Bound for the hyperplane-supported operator ``-Delta - v delta(y)``.

    Its negative spectrum is that of ``H(v/2)``, so the surface bound applies
    after the rescaling ``v -> v/2``: the returned value is
    ``2^(-2g-d) * factor * L^cl_{g,d}`` and the entry is sharp for gamma >= 3/2.

    Returns
    -------
    value : float
    entry : BoundEntry
    """
    q = _query(q, d)
    entry = surface_bound_table(q)
    return 2.0 ** (-2 * q.gamma - q.d) * entry.factor * lt_classical(q), entry


# ---------------------------------------------------------------------------
# relativistic bound table


def optimal_rho(gamma, d):
    """Minimizer of ``(rho/sqrt(1-rho^2))^g rho^(-g-d)`` over 0 < rho < 1.

    Returns
    -------
    rho : float
        ``sqrt(d/(g+d))``.
    factor : float
        ``g^(g/2) d^(d/2) / (g+d)^((g+d)/2)``, the reciprocal of the minimum.
    """
    g = float(gamma)
    if not math.isfinite(g) or g <= 0:
        raise DomainError(f"gamma must be > 0, got {gamma!r}")
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    rho = math.sqrt(d / (g + d))
    log_f = 0.5 * g * math.log(g) + 0.5 * d * math.log(d) - 0.5 * (g + d) * math.log(g + d)
    return rho, math.exp(log_f)


def duality_factor(gamma, rho):
    """``(rho / sqrt(1 - rho^2))^gamma``, the prefactor of the right-hand
    moment inequality; infinite as rho -> 1."""
    if not 0 < rho < 1:
        raise DomainError(f"rho must lie in (0, 1), got {rho!r}")
    return (rho / math.sqrt(1.0 - rho * rho)) ** gamma


def relativistic_bound_candidates(q, d=None):
    """Tabulated upper bounds on ``D_{g,d} / D^cl_{g,d}`` valid at (g, d)."""
    q = _query(q, d)
    g, dd = q.gamma, q.d
    out = []
    if dd == 2:
        out.append(BoundEntry(6.04, "d=2, gamma>=0", "upper", "Daubechies-type bound, d=2"))
        if 2 <= g < 3:
            out.append(BoundEntry(math.sqrt(3) * math.pi, "d=2, 2<=gamma<3", "upper", _SRC_AL))
        if g >= 3:
            out.append(BoundEntry(4.0, "d=2, gamma>=3", "upper", _SRC_AL))
    if dd == 3:
        out.append(BoundEntry(6.08, "d=3, gamma>=0", "upper", "Daubechies bound, d=3"))
        if g >= 3:
            out.append(BoundEntry(15 * math.pi / 8, "d=3, gamma>=3", "upper", _SRC_AL))
    if g == 0.0 and dd >= 2:
        # the gamma = 0 surface and relativistic sharp constants coincide
        for e in surface_bound_candidates(q):
            out.append(BoundEntry(e.factor, e.window, "upper",
                                  "equal gamma=0 sharp constants; " + e.source))
    if g > 0:
        half = ConstantQuery(g / 2, dd)
        try:
            s = surface_bound_table(half)
        except NoBoundError:
            s = None
        if s is not None:
            f = s.factor * lt_classical(half) / rel_classical(q)
            out.append(BoundEntry(f, f"gamma>0 with gamma/2 in window [{s.window}]",
                                  "upper", _SRC_DUAL))
    return out


def relativistic_bound_table(q, d=None):
    """Best tabulated upper bound on ``D_{g,d} / D^cl_{g,d}``.

    Includes 6.04 (d=2), 6.08 (d=3), the lifted factors sqrt(3)*pi
    (d=2, 2<=g<3), 4 (d=2, g>=3), 15pi/8 (d=3, g>=3), and for g > 0 the
    bound ``D_{g,d} <= S_{g/2,d}`` converted to a multiple of ``D^cl``.

    Raises
    ------
    NoBoundError
        At g = 0, d = 1 (a negative eigenvalue exists for every non-trivial
        v >= 0) or when no constant is tabulated.
    """
    q = _query(q, d)
    if q.gamma == 0.0 and q.d == 1:
        raise NoBoundError(
            "no relativistic Lieb-Thirring inequality holds at gamma=0, d=1: "
            "sqrt(-Delta)-v has a negative eigenvalue for every non-trivial v>=0"
        )
    cands = relativistic_bound_candidates(q)
    if not cands:
        raise NoBoundError(f"no tabulated relativistic constant for gamma={q.gamma}, d={q.d}")
    return min(cands, key=lambda e: e.factor)


def relativistic_lower_bounds(q, d=None):
    """Lower bounds on ``D_{g,d} / D^cl_{g,d}``."""
    q = _query(q, d)
    out = [BoundEntry(1.0, "all gamma, d", "lower", _SRC_WEYL)]
    if q.gamma == 0.0 and 2 <= q.d <= 7:
        out.append(BoundEntry(daubechies_lower_factor(q.d), "gamma=0, 2<=d<=7", "lower",
                              _SRC_SOBOLEV))
    return out


# ---------------------------------------------------------------------------
# Aizenman-Lieb scalar identity

_GRADING_PANELS = 40


def _singular_endpoint_integral(p, g, rule):
    """``int_0^{1/2} x^(p-1) g(x) dx`` for ``g`` smooth on [0, 1/2].

    Geometric panels ``[2^-(j+1), 2^-j]`` keep ``x^(p-1)`` smooth on each
    panel; the innermost piece ``[0, 2^-J]`` uses ``x = w^(1/p)``, which
    absorbs the endpoint power exactly.
    """
    total = 0.0
    nodes, weights = np.asarray(rule.nodes), np.asarray(rule.weights)
    for j in range(1, _GRADING_PANELS + 1):
        a, b = 2.0 ** (-j - 1), 2.0 ** (-j)
        x = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        total += 0.5 * (b - a) * float(np.dot(weights, x ** (p - 1) * g(x)))
    top = 2.0 ** (-(_GRADING_PANELS + 1) * p)
    w = 0.5 * top * (1.0 + nodes)
    total += 0.5 * top * float(np.dot(weights, g(w ** (1.0 / p)))) / p
    return total


def aizenman_lieb_identity(t, gamma, gamma0, rule=None):
    """Quadrature value of
    ``B(g-g0, g0+1)^-1 int_0^inf s^(g-g0-1) (t+s)_-^g0 ds`` for ``t < 0``.

    The exact value is ``|t|^g``. After ``s = |t| u`` the integral is split
    at ``u = 1/2`` so that each half has a single algebraic endpoint
    singularity, handled by graded panels.

    Parameters
    ----------
    t : float
        Negative real.
    gamma, gamma0 : float
        Exponents with ``0 <= gamma0 < gamma``.
    rule : QuadratureRule, optional
        Panel rule, default Gauss-Legendre of order 20.
    """
    t = float(t)
    g, g0 = float(gamma), float(gamma0)
    if not (math.isfinite(t) and t < 0):
        raise DomainError(f"t must be negative, got {t!r}")
    if not (0 <= g0 < g):
        raise DomainError(f"need 0 <= gamma0 < gamma, got gamma={g}, gamma0={g0}")
    rule = rule or gauss_legendre(20)
    a = g - g0
    left = _singular_endpoint_integral(a, lambda u: (1.0 - u) ** g0, rule)
    right = _singular_endpoint_integral(g0 + 1.0, lambda x: (1.0 - x) ** (a - 1.0), rule)
    # the substitution x = 1-u turns (1-u)^g0 into x^((g0+1)-1)
    return abs(t) ** g * (left + right) / beta_fn(a, g0 + 1.0)


# ---------------------------------------------------------------------------
# table dump

CSV_COLUMNS = ("gamma", "d", "quantity", "value", "kind", "window", "source")


def _fmt(x):
    return f"{x:.17g}" if isinstance(x, float) else str(x)


def constant_rows(gamma, d):
    """Rows describing every constant and bound known at (gamma, d)."""
    q = _query(gamma, d)
    rows = [
        (q.gamma, q.d, "L_cl", lt_classical(q), "formula", "all", "semiclassical phase-space volume"),
        (q.gamma, q.d, "D_cl", rel_classical(q), "formula", "all",
         "relativistic semiclassical phase-space volume"),
    ]
    try:
        entries = surface_bound_candidates(q)
        surface_bound_table(q)
    except NoBoundError as exc:
        rows.append((q.gamma, q.d, "S/L_cl", float("nan"), "none", "", str(exc)))
    else:
        for e in entries:
            rows.append((q.gamma, q.d, "S/L_cl", e.factor, e.kind, e.window, e.source))
        if q.gamma >= 1.5:
            val, _ = delta_plane_constant(q)
            rows.append((q.gamma, q.d, "S_delta_plane", val, "sharp", "gamma>=3/2",
                         "surface constant with potential rescaled by 1/2"))
    for e in surface_lower_bounds(q):
        rows.append((q.gamma, q.d, "S/L_cl", e.factor, e.kind, e.window, e.source))
    try:
        entries = relativistic_bound_candidates(q)
        relativistic_bound_table(q)
    except NoBoundError as exc:
        rows.append((q.gamma, q.d, "D/D_cl", float("nan"), "none", "", str(exc)))
    else:
        for e in entries:
            rows.append((q.gamma, q.d, "D/D_cl", e.factor, e.kind, e.window, e.source))
    for e in relativistic_lower_bounds(q):
        rows.append((q.gamma, q.d, "D/D_cl", e.factor, e.kind, e.window, e.source))
    if q.d >= 2:
        rows.append((q.gamma, q.d, "S_prime", sobolev_trace_constant(q.d), "formula", "d>=2",
                     "sharp fractional Sobolev constant"))
    if q.gamma > 0:
        rho, f = optimal_rho(q.gamma, q.d)
        rows.append((q.gamma, q.d, "rho_opt", rho, "formula", "gamma>0", "moment duality optimum"))
        rows.append((q.gamma, q.d, "duality_coefficient", f, "formula", "gamma>0",
                     "moment duality optimum"))
    return rows


def dump_constants_csv(pairs, stream=None):
    """Write the rows for each (gamma, d) in ``pairs`` as CSV.

    Returns the text when ``stream`` is None.
    """
    own = stream is None
    if own:
        stream = io.StringIO()
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for g, d in pairs:
        for row in constant_rows(g, d):
            w.writerow([_fmt(v) for v in row])
    if own:
        return stream.getvalue()
    return None
