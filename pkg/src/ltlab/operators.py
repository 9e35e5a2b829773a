"""Discretizations of the operators under study.

* ``sqrt(-Delta + tau) - v`` on a periodic box, assembled in real space from
  the exact Fourier multiplier (unitarily equivalent to the Fourier-basis
  matrix, and real symmetric).
* The Birman-Schwinger matrix ``v^(1/2) (-Delta + tau)^(-1/2) v^(1/2)``, both
  from the Fourier multiplier and (d = 1) from the Bessel kernel.
* ``H(v)``: the Laplacian on the half plane with the Robin condition
  ``-du/dy = v u`` at ``y = 0``, and ``-Delta - v(x) delta(y)`` on the
  plane, both from the quadratic form with Dirichlet far-field truncation.
* The half-line base case and the interval waveguide.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    CompletenessError,
    ConfigurationError,
    DomainError,
    ResolutionWarning,
    TruncationWarning,
)
from .numerics import (
    MAX_DENSE,
    Spectrum,
    SymmetricMatrix,
    eig_dense,
    eig_lanczos_lowest,
    factor_ldl,
    inertia_below,
)
from .potentials import Potential, parse_potential
from .specfun import bessel_k

__all__ = [
    "Potential",
    "parse_potential",
    "BoxGrid",
    "HalfSpaceGrid",
    "DiscreteOperator",
    "relativistic_matrix",
    "schroedinger_box_matrix",
    "birman_schwinger_matrix",
    "birman_schwinger_from_values",
    "count_above_one",
    "surface_count",
    "duality_counts",
    "nystrom_birman_schwinger",
    "count_negatives_relativistic",
    "CountResult",
    "robin_halfspace_matrix",
    "robin_halfline_matrix",
    "delta_plane_matrix",
    "negative_spectrum",
    "waveguide_riesz_exact",
    "DENSE_MODE_CAP",
]

DENSE_MODE_CAP = {1: 2048, 2: 48}
_EULER_GAMMA = 0.57721566490153286061


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class BoxGrid:
    """Periodic box ``[-L, L)^d`` with ``M`` equispaced points per axis.

    Frequencies are ``xi = (pi / L) k`` with ``k`` in ``{-M/2, ..., M/2-1}``.
    Dense operator matrices require ``M <= 2048`` (d = 1) or ``M <= 48``
    (d = 2); Birman-Schwinger matrices only keep the points where ``v > 0``
    and may use finer grids. Three-dimensional boxes are used for
    FFT-only quantities (no matrices).
    """

    d: int
    half_length: float
    modes: int

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ConfigurationError(f"d must be 1, 2 or 3, got {self.d}")
        if not (math.isfinite(self.half_length) and self.half_length > 0):
            raise ConfigurationError("half_length must be positive")
        if int(self.modes) != self.modes or self.modes < 2 or self.modes % 2:
            raise ConfigurationError(f"modes must be an even integer >= 2, got {self.modes}")
        object.__setattr__(self, "modes", int(self.modes))
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def h(self):
        return 2.0 * self.half_length / self.modes

    @property
    def points(self):
        """Grid points along one axis."""
        return -self.half_length + self.h * np.arange(self.modes)

    @property
    def frequencies(self):
        """Frequencies along one axis in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.modes, d=self.h)

    def mesh(self):
        """Coordinate arrays of all grid points (flattened, C order)."""
        x = self.points
        if self.d == 1:
            return (x,)
        return tuple(c.ravel() for c in np.meshgrid(*([x] * self.d), indexing="ij"))

    def symbol_grid(self):
        """``|xi|^2`` on the full frequency grid."""
        k = self.frequencies
        if self.d == 1:
            return k * k
        return sum(c * c for c in np.meshgrid(*([k] * self.d), indexing="ij"))

    def refined(self, factor=2):
        """Same box, ``factor`` times more modes."""
        return BoxGrid(self.d, self.half_length, self.modes * factor)

    def enlarged(self, factor=1.5):
        """Larger box at (about) the same spacing; M rounded to even."""
        m = int(round(self.modes * factor / 2.0)) * 2
        return BoxGrid(self.d, self.half_length * m / self.modes, m)

    def describe(self):
        return {"kind": "box", "d": self.d, "L": self.half_length, "M": self.modes}


@dataclass(frozen=True)
class HalfSpaceGrid:
    """Finite-difference grid for the half plane truncated to
    ``[-X, X] x [0, Y]``.

    ``nx`` interior points in x with spacing ``hx = 2X/(nx+1)``; rows
    ``y_j = j hy`` for ``j = 0..ny`` with ``hy = Y/(ny+1)``; Dirichlet at
    ``x = +-X`` and ``y = Y``, Robin row at ``y = 0``.
    """

    x_half_length: float
    y_depth: float
    nx: int
    ny: int

    def __post_init__(self):
        for name in ("x_half_length", "y_depth"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be positive")
            object.__setattr__(self, name, v)
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer")
            object.__setattr__(self, name, int(v))

    @property
    def hx(self):
        return 2.0 * self.x_half_length / (self.nx + 1)

    @property
    def hy(self):
        return self.y_depth / (self.ny + 1)

    @property
    def x(self):
        return -self.x_half_length + self.hx * np.arange(1, self.nx + 1)

    @property
    def y(self):
        return self.hy * np.arange(self.ny + 1)

    def refined(self, factor=2):
        """Same domain, spacings divided by ``factor``."""
        return HalfSpaceGrid(self.x_half_length, self.y_depth,
                             factor * (self.nx + 1) - 1, factor * (self.ny + 1) - 1)

    def enlarged(self, factor=1.5):
        """Domain scaled by ``factor`` at the same spacings (rounded)."""
        nx1 = int(round((self.nx + 1) * factor))
        ny1 = int(round((self.ny + 1) * factor))
        return HalfSpaceGrid(self.hx * nx1 / 2.0, self.hy * ny1, nx1 - 1, ny1 - 1)

    def describe(self):
        return {"kind": "halfspace", "X": self.x_half_length, "Y": self.y_depth,
                "nx": self.nx, "ny": self.ny}


# ---------------------------------------------------------------------------
# operator container


@dataclass(frozen=True)
class DiscreteOperator:
    """A symmetric matrix together with how it was discretized.

    Attributes
    ----------
    matrix : SymmetricMatrix
    kind : str
        ``relativistic``, ``schroedinger_box``, ``birman_schwinger``,
        ``robin``, ``halfline`` or ``delta_plane``.
    d : int
        Dimension of the boundary variable.
    grid : BoxGrid or HalfSpaceGrid or dict
    tau : float
        Spectral shift used in the assembly.
    potential : Potential or None
    lower_bound : float
        A value certified to lie below the spectrum (used as the shift-invert
        pole); ``-inf`` if unknown.
    meta : dict
    """

    matrix: SymmetricMatrix
    kind: str
    d: int
    grid: object
    tau: float = 0.0
    potential: Potential | None = None
    lower_bound: float = -math.inf
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return self.matrix.n

    def count_below(self, shift=0.0):
        """Number of eigenvalues strictly below ``shift`` (by inertia)."""
        return inertia_below(self.matrix, shift)

    def spectrum(self, vectors=False):
        """Full spectrum (dense path)."""
        return eig_dense(self.matrix, vectors=vectors)


def _check_dense_dim(n):
    if n > MAX_DENSE:
        raise CapacityError(f"matrix dimension {n} exceeds the dense limit {MAX_DENSE}")


def _check_dims(p, g):
    if p.d != g.d:
        raise ConfigurationError(f"potential dimension {p.d} != grid dimension {g.d}")


def _truncation_check(p, g):
    r = p.support_radius(1e-10)
    if p.peak > 0 and r > g.half_length / 2:
        est = float(p.radial(g.half_length / 2)) / p.peak
        warnings.warn(TruncationWarning(
            f"potential support radius {r:.3g} exceeds half the box ({g.half_length / 2:.3g}); "
            f"relative tail at L/2 is {est:.3g}", estimate=est), stacklevel=3)


def _circulant_kernel(g, symbol):
    """First column of the circulant matrix with Fourier multiplier ``symbol``
    (array on the FFT frequency grid), reshaped to the box."""
    return np.real(np.fft.ifftn(symbol))


def _circulant_block(g, kernel, idx):
    """Rows/cols ``idx`` (flat indices) of the circulant matrix."""
    m = g.modes
    coords = np.unravel_index(idx, (m,) * g.d)
    diffs = tuple((c[:, None] - c[None, :]) % m for c in coords)
    return kernel[diffs]


def _multiplier_matrix(p, g, symbol, potential_values, kind, tau, lower_bound, meta):
    if p is not None and p.d != g.d:
        raise ConfigurationError(f"potential dimension {p.d} != grid dimension {g.d}")
    if g.d not in DENSE_MODE_CAP or g.modes > DENSE_MODE_CAP[g.d]:
        raise CapacityError(
            f"M={g.modes} exceeds the dense cap {DENSE_MODE_CAP.get(g.d, 0)} for d={g.d}")
    n = g.modes ** g.d
    _check_dense_dim(n)
    kernel = _circulant_kernel(g, symbol)
    a = _circulant_block(g, kernel, np.arange(n))
    a[np.diag_indices(n)] -= potential_values
    defect = float(np.max(np.abs(a - a.T))) if n else 0.0
    a = 0.5 * (a + a.T)
    meta = dict(meta, symmetry_defect=defect)
    return DiscreteOperator(SymmetricMatrix.from_dense(a), kind, g.d, g, tau, p,
                            lower_bound, meta)


def relativistic_matrix(p, g, tau=0.0, offset=0.0):
    """Matrix of ``sqrt(-Delta + tau) - offset - v`` on the periodic box.

    Parameters
    ----------
    p : Potential
    g : BoxGrid
    tau : float
        Spectral shift (``m^2`` for the massive operator).
    offset : float
        Constant subtracted from the kinetic part (``m`` for the massive
        operator).

    Warns
    -----
    TruncationWarning
        If the potential is not negligible at half the box size.
    """
    if tau < 0:
        raise DomainError("tau must be >= 0")
    _check_dims(p, g)
    _truncation_check(p, g)
    symbol = np.sqrt(g.symbol_grid() + tau) - offset
    vals = p(*g.mesh())
    return _multiplier_matrix(p, g, symbol, vals, "relativistic", tau,
                              -offset - p.peak - 1e-12, {"offset": offset})


def schroedinger_box_matrix(p, g, power=2):
    """Matrix of ``-Delta - v^power`` on the periodic box."""
    _check_dims(p, g)
    _truncation_check(p, g)
    vals = p(*g.mesh()) ** power
    return _multiplier_matrix(p, g, g.symbol_grid(), vals, "schroedinger_box", 0.0,
                              -p.peak ** power - 1e-12, {"power": power})


def birman_schwinger_from_values(g, values, tau, potential=None):
    """Birman-Schwinger matrix for non-negative samples ``values`` on the
    box grid ``g`` (flattened, C order). Points where the samples vanish
    (below ``1e-14`` of the maximum) are dropped."""
    if not tau > 0:
        raise DomainError("the Birman-Schwinger operator needs tau > 0")
    values = np.asarray(values, dtype=float)
    if np.any(values < 0):
        raise DomainError("Birman-Schwinger samples must be non-negative")
    vmax = float(values.max()) if values.size else 0.0
    idx = np.arange(values.size) if vmax <= 0 else np.flatnonzero(values > 1e-14 * vmax)
    _check_dense_dim(idx.size)
    kernel = _circulant_kernel(g, 1.0 / np.sqrt(g.symbol_grid() + tau))
    k = _circulant_block(g, kernel, idx)
    sq = np.sqrt(values[idx])
    a = sq[:, None] * k * sq[None, :]
    a = 0.5 * (a + a.T)
    return DiscreteOperator(SymmetricMatrix.from_dense(a), "birman_schwinger", g.d, g, tau,
                            potential, 0.0, {"support": idx})


def birman_schwinger_matrix(p, g, tau):
    """Birman-Schwinger matrix ``v^(1/2) (-Delta + tau)^(-1/2) v^(1/2)``.

    The Fourier multiplier ``(|xi|^2 + tau)^(-1/2)`` is applied exactly on
    the periodic box. Rows and columns where ``v`` vanishes (below
    ``1e-14 max v``) carry only zero eigenvalues and are dropped; the kept
    flat grid indices are in ``meta["support"]``.

    Raises
    ------
    DomainError
        If ``tau <= 0``.
    """
    if not tau > 0:
        raise DomainError("the Birman-Schwinger operator needs tau > 0")
    _check_dims(p, g)
    _truncation_check(p, g)
    return birman_schwinger_from_values(g, p(*g.mesh()), tau, p)


def count_above_one(op, eps=1e-8):
    """Eigenvalues of a Birman-Schwinger matrix above 1, by the inertia of
    ``I - BS``; also reports whether one lies within ``eps`` of 1."""
    n = op.n
    a = -op.matrix.to_dense()
    a[np.diag_indices(n)] += 1.0
    m = SymmetricMatrix.from_dense(a)
    c = inertia_below(m, 0.0)
    near = inertia_below(m, eps) != inertia_below(m, -eps)
    return c, near


def nystrom_birman_schwinger(p, tau, a, b, n):
    """Birman-Schwinger matrix (d = 1) from the kernel
    ``(1/pi) K_0(sqrt(tau) |x - y|)`` on ``n`` midpoints of ``[a, b]``.

    The logarithmic singularity is handled by a corrected diagonal weight
    ``(h/pi) (log(4 pi / (h sqrt(tau))) - euler_gamma)``, which makes the
    rule third order for smooth ``v``.
    """
    if p.d != 1:
        raise ConfigurationError("the Bessel-kernel route is one-dimensional")
    if not tau > 0:
        raise DomainError("tau must be > 0")
    h = (b - a) / n
    x = a + h * (np.arange(n) + 0.5)
    st = math.sqrt(tau)
    kvals = np.empty(n)
    kvals[0] = (h / math.pi) * (math.log(4 * math.pi / (h * st)) - _EULER_GAMMA)
    for j in range(1, n):
        kvals[j] = (h / math.pi) * bessel_k(0.0, st * j * h)
    idx = np.arange(n)
    w = kvals[np.abs(idx[:, None] - idx[None, :])]
    sq = np.sqrt(p(x))
    mat = sq[:, None] * w * sq[None, :]
    return DiscreteOperator(SymmetricMatrix.from_dense(0.5 * (mat + mat.T)),
                            "birman_schwinger", 1, {"kind": "nystrom", "a": a, "b": b, "n": n},
                            tau, p, 0.0, {"points": x})


@dataclass(frozen=True)
class CountResult:
    """Outcome of :func:`count_negatives_relativistic`.

    ``count`` is the reported value; ``bs_count`` and ``direct_count`` are
    the per-route counts (None when a route was not run).
    ``near_threshold`` flags an eigenvalue within ``1e-8`` of the threshold.
    """

    count: int
    bs_count: int | None
    direct_count: int | None
    near_threshold: bool


def _bs_count(p, g, tau):
    return count_above_one(birman_schwinger_matrix(p, g, tau))


def count_negatives_relativistic(p, g, tau=0.0, route="auto", details=False):
    """``N(sqrt(-Delta + tau) - v)``, the number of negative eigenvalues.

    Parameters
    ----------
    route : {"auto", "bs", "direct", "both"}
        ``bs`` counts Birman-Schwinger eigenvalues above 1 through the
        inertia of ``I - BS`` (needs ``tau > 0``); ``direct`` counts the
        negative eigenvalues of :func:`relativistic_matrix` by inertia;
        ``both`` runs the two and reports both. ``auto`` is ``bs`` for
        ``tau > 0`` and ``direct`` otherwise.
    details : bool
        Return a :class:`CountResult` instead of an int.

    Warns
    -----
    ResolutionWarning
        If an eigenvalue lies within 1e-8 of the threshold.
    """
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if route == "auto":
        route = "bs" if tau > 0 else "direct"
    if route not in ("bs", "direct", "both"):
        raise ConfigurationError(f"unknown route {route!r}")
    if route in ("bs", "both") and not tau > 0:
        raise DomainError("the Birman-Schwinger route needs tau > 0")
    bs = direct = None
    near = False
    if p.peak == 0.0:
        bs = 0 if route in ("bs", "both") else None
        direct = 0 if route in ("direct", "both") else None
    else:
        if route in ("bs", "both"):
            bs, near_bs = _bs_count(p, g, tau)
            near = near or near_bs
        if route in ("direct", "both"):
            m = relativistic_matrix(p, g, tau).matrix
            direct = inertia_below(m, 0.0)
            near = near or inertia_below(m, 1e-8) != inertia_below(m, -1e-8)
    if near:
        warnings.warn(ResolutionWarning(
            f"an eigenvalue lies within 1e-8 of the counting threshold (tau={tau}); "
            f"counts: bs={bs}, direct={direct}"), stacklevel=2)
    count = bs if bs is not None else direct
    res = CountResult(int(count), bs, direct, near)
    return res if details else res.count


def surface_count(p, g, tau):
    """``N(-tau, H(v))`` through ``N(-tau, H(v)) = N(sqrt(-Delta + tau) - v)``
    on the box ``g``: the Birman-Schwinger count for ``tau > 0`` and the
    inertia of :func:`relativistic_matrix` at ``tau = 0``. No warnings are
    issued near the threshold (bisection drives ``tau`` onto eigenvalues)."""
    if tau < 0:
        raise DomainError("tau must be >= 0")
    if p.peak == 0.0:
        return 0
    if tau == 0:
        return inertia_below(relativistic_matrix(p, g).matrix, 0.0)
    return count_above_one(birman_schwinger_matrix(p, g, tau))[0]


def duality_counts(p, taus, halfspace, box):
    """Rows ``{tau, robin, bs, equal}``: ``N(-tau, H(v))`` from the Robin
    finite-difference operator and from the Birman-Schwinger count."""
    rows = []
    for tau in taus:
        if not tau > 0:
            raise DomainError("duality counts need tau > 0")
        robin = inertia_below(robin_halfspace_matrix(p, halfspace).matrix, -tau)
        bs = count_negatives_relativistic(p, box, tau, route="bs")
        rows.append({"tau": float(tau), "robin": int(robin), "bs": int(bs),
                     "equal": robin == bs})
    return rows


# ---------------------------------------------------------------------------
# half-space finite differences


def _resolution_check(p, hy):
    if p.peak > 0 and hy > 0.2 / p.peak:
        warnings.warn(ResolutionWarning(
            f"hy={hy:.3g} does not resolve the boundary layer of width "
            f"1/max v={1 / p.peak:.3g} (need hy <= {0.2 / p.peak:.3g})"), stacklevel=3)


def _assemble_layers(nx, nrows, hx, hy, diag_rows, coupling):
    """Assemble a 5-point matrix on ``nx`` x ``nrows`` nodes.

    ``diag_rows[j]`` is the diagonal of row ``j`` (length nx); x-neighbours
    couple with ``-1/hx^2`` and rows ``j, j+1`` with ``coupling[j]``. The
    ordering puts the shorter axis inside the blocks so that the block
    tridiagonal factorization works with blocks of ``min(nx, nrows)``.
    """
    i = np.arange(nx)
    j = np.arange(nrows)
    if nx <= nrows:
        def flat(ii, jj):
            return jj * nx + ii
        block = nx
    else:
        def flat(ii, jj):
            return ii * nrows + jj
        block = nrows
    I, J = np.meshgrid(i, j, indexing="ij")
    rows = [flat(I, J).ravel()]
    cols = [rows[0]]
    vals = [np.asarray(diag_rows).T.ravel()]
    # x-neighbours
    Ix, Jx = np.meshgrid(i[1:], j, indexing="ij")
    rx, cx = flat(Ix, Jx).ravel(), flat(Ix - 1, Jx).ravel()
    rows.append(np.maximum(rx, cx))
    cols.append(np.minimum(rx, cx))
    vals.append(np.full(rx.size, -1.0 / hx ** 2))
    # y-neighbours
    Iy, Jy = np.meshgrid(i, j[1:], indexing="ij")
    ry, cy = flat(Iy, Jy).ravel(), flat(Iy, Jy - 1).ravel()
    rows.append(np.maximum(ry, cy))
    cols.append(np.minimum(ry, cy))
    vals.append(np.broadcast_to(np.asarray(coupling)[None, :], Iy.shape).ravel())
    n = nx * nrows
    return SymmetricMatrix.from_coo(n, np.concatenate(rows), np.concatenate(cols),
                                    np.concatenate(vals), block_size=block)


def robin_halfspace_matrix(p, g):
    """Finite-difference matrix of ``H(v)`` (d = 1) from its quadratic form.

    The form ``sum |grad u|^2 - hx sum_i v(x_i) u(x_i, 0)^2`` is taken with
    first-order differences; the boundary row carries half the mass
    (trapezoid rule in y), and the generalized problem ``K u = lambda M u``
    is symmetrized as ``M^(-1/2) K M^(-1/2)``. Since the form is restricted
    to functions vanishing on the far sides, eigenvalues are variational
    upper bounds for the Dirichlet-truncated problem.

    Warns
    -----
    ResolutionWarning
        If ``hy > 0.2 / max v``.
    """
    if p.d != 1:
        raise ConfigurationError("the half-space discretization is for d = 1")
    _resolution_check(p, g.hy)
    hx, hy = g.hx, g.hy
    nrows = g.ny + 1
    v = p(g.x)
    base = 2.0 / hx ** 2 + 2.0 / hy ** 2
    diag = np.full((nrows, g.nx), base)
    diag[0] -= 2.0 * v / hy
    omega = np.ones(nrows)
    omega[0] = 0.5
    coupling = -1.0 / (hy ** 2 * np.sqrt(omega[:-1] * omega[1:]))
    mat = _assemble_layers(g.nx, nrows, hx, hy, diag, coupling)
    return DiscreteOperator(mat, "robin", 1, g, 0.0, p, -(p.peak ** 2) * (1 + 1e-3) - 1e-6,
                            {"mass_rows": omega * hx * hy})


def delta_plane_matrix(p, g):
    """Finite-difference matrix of ``-Delta - v(x) delta(y)`` on
    ``[-X, X] x [-Y, Y]`` with Dirichlet sides, rows ``y_j = j hy`` for
    ``j = -ny..ny``.

    Restricted to even functions of y it coincides with
    :func:`robin_halfspace_matrix` for ``v / 2`` on the same grid.
    """
    if p.d != 1:
        raise ConfigurationError("the delta-plane discretization is for d = 1")
    _resolution_check(p.scaled(0.5), g.hy)
    hx, hy = g.hx, g.hy
    nrows = 2 * g.ny + 1
    v = p(g.x)
    diag = np.full((nrows, g.nx), 2.0 / hx ** 2 + 2.0 / hy ** 2)
    diag[g.ny] -= v / hy
    coupling = np.full(nrows - 1, -1.0 / hy ** 2)
    mat = _assemble_layers(g.nx, nrows, hx, hy, diag, coupling)
    return DiscreteOperator(mat, "delta_plane", 1, g, 0.0, p,
                            -(p.peak ** 2) * (1 + 1e-3) - 1e-6, {"center_row": g.ny})


def robin_halfline_matrix(v, Y, ny):
    """Half-line ``-u''`` on ``[0, Y]`` with ``-u'(0) = v u(0)`` and
    ``u(Y) = 0``, from the quadratic form with a half-weight first node.

    Its single negative eigenvalue is ``(2 - 2 sqrt(1 + v^2 h^2)) / h^2``
    for large ``Y``, i.e. ``-v^2 + O(h^2)``.
    """
    v = float(v)
    if v < 0:
        raise DomainError("v must be >= 0")
    h = Y / (ny + 1)
    n = ny + 1
    diag = np.full(n, 2.0 / h ** 2)
    diag[0] -= 2.0 * v / h
    off = np.full(n - 1, -1.0 / h ** 2)
    off[0] *= math.sqrt(2.0)
    rows = np.concatenate([np.arange(n), np.arange(1, n)])
    cols = np.concatenate([np.arange(n), np.arange(n - 1)])
    mat = SymmetricMatrix.from_coo(n, rows, cols, np.concatenate([diag, off]), block_size=1)
    return DiscreteOperator(mat, "halfline", 0, {"kind": "halfline", "Y": Y, "ny": ny},
                            0.0, None, -v * v * (1 + 1e-3) - 1e-6, {"v": v, "h": h})


def negative_spectrum(op, shift=0.0, max_count=40, tol=1e-10):
    """All eigenvalues of ``op`` below ``shift``.

    The count comes from inertia; the eigenvalues from the dense solver
    (dense storage) or shift-invert Lanczos from the certified lower
    bound (sparse storage). The result is marked ``covers=shift`` because
    its length matches the inertia count.
    """
    count = inertia_below(op.matrix, shift)
    if count == 0:
        return Spectrum(np.zeros(0), False, op.n, covers=shift)
    if not op.matrix.is_sparse:
        ev = eig_dense(op.matrix).eigenvalues
        sel = ev[ev < shift]
        if sel.size != count:
            raise CompletenessError(
                f"dense solver found {sel.size} eigenvalues below {shift}, inertia {count}")
        return Spectrum(sel, False, op.n, covers=shift)
    if count > max_count:
        raise CapacityError(f"{count} eigenvalues below {shift} exceed max_count={max_count}")
    sigma = op.lower_bound
    if not math.isfinite(sigma):
        raise ConfigurationError("operator has no certified lower bound for shift-invert")
    spec = eig_lanczos_lowest(op.matrix, k=count, tol=tol, sigma=sigma)
    ev = spec.eigenvalues
    if np.any(ev >= shift):
        raise CompletenessError("Lanczos missed eigenvalues below the shift "
                                "(repeated eigenvalue?)")
    return Spectrum(ev, False, op.n, covers=shift, residuals=spec.residuals)


# ---------------------------------------------------------------------------
# waveguide


def waveguide_riesz_exact(L_omega, v0, gamma, k_max):
    """``sum_k (v0^2 - (pi k / L_omega)^2)_+^gamma``: the Riesz mean of the
    Dirichlet Laplacian on an interval of length ``L_omega`` shifted by
    ``-v0^2``.

    Raises
    ------
    CompletenessError
        If ``k_max < ceil(v0 L_omega / pi)``, i.e. a contributing mode
        would be left out.
    """
    if not (L_omega > 0 and v0 >= 0 and gamma >= 0):
        raise DomainError("need L_omega > 0, v0 >= 0, gamma >= 0")
    need = math.ceil(v0 * L_omega / math.pi)
    if k_max < need:
        raise CompletenessError(f"k_max={k_max} < {need}: contributing modes omitted")
    k = np.arange(1, int(k_max) + 1)
    gap = v0 * v0 - (math.pi * k / L_omega) ** 2
    gap = gap[gap > 0]
    if gamma == 0:
        return float(gap.size)
    return float(np.sum(gap ** gamma))
