"""Immutable symmetric matrices and eigenvalue containers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import DataError

__all__ = ["SymmetricMatrix", "Spectrum"]


class SymmetricMatrix:
    """Real symmetric matrix stored by its lower triangle.

    Use :meth:`from_dense` or :meth:`from_coo` to build one. Instances are
    treated as immutable: the stored arrays are flagged read-only.

    Attributes
    ----------
    n : int
        Dimension.
    is_sparse : bool
        Whether the storage is a sparse coordinate list.
    block_size : int or None
        For sparse storage, a block size ``b`` such that the matrix is block
        tridiagonal with ``b x b`` blocks. Derived from the bandwidth when
        not supplied.
    """

    def __init__(self, n, lower, is_sparse, block_size=None):
        self.n = int(n)
        self._lower = lower
        self.is_sparse = bool(is_sparse)
        self.block_size = block_size
        self._full = None
        self._norm = None

    @classmethod
    def from_dense(cls, a):
        """Build from a square array; only its lower triangle is read."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DataError(f"expected a square matrix, got shape {a.shape}")
        lower = np.tril(a)
        if not np.all(np.isfinite(lower)):
            raise DataError("matrix has non-finite entries")
        lower.setflags(write=False)
        return cls(a.shape[0], lower, False)

    @classmethod
    def from_coo(cls, n, rows, cols, vals, block_size=None):
        """Build from coordinates with ``row >= col``; duplicates are summed."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=float)
        if not (rows.shape == cols.shape == vals.shape):
            raise DataError("rows, cols and vals must have equal length")
        if rows.size and (np.any(rows < cols) or rows.max() >= n or cols.min() < 0):
            raise DataError("coordinates must satisfy n > row >= col >= 0")
        if not np.all(np.isfinite(vals)):
            raise DataError("matrix has non-finite entries")
        lower = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        lower.sum_duplicates()
        if block_size is None:
            coo = lower.tocoo()
            bw = int(np.max(coo.row - coo.col)) if coo.nnz else 0
            block_size = max(bw, 1)
        return cls(n, lower, True, int(block_size))

    @classmethod
    def from_sparse(cls, a, block_size=None):
        """Build from any scipy sparse matrix; only its lower triangle is read."""
        coo = sp.tril(sp.coo_matrix(a)).tocoo()
        return cls.from_coo(a.shape[0], coo.row, coo.col, coo.data, block_size)

    @property
    def lower(self):
        """Stored lower triangle (ndarray or CSR matrix)."""
        return self._lower

    def full(self):
        """Symmetric full matrix, ndarray for dense storage, CSR for sparse."""
        if self._full is None:
            if self.is_sparse:
                lo = self._lower
                self._full = (lo + lo.T - sp.diags(lo.diagonal())).tocsr()
            else:
                lo = self._lower
                full = lo + lo.T
                full[np.diag_indices(self.n)] *= 0.5
                full.setflags(write=False)
                self._full = full
        return self._full

    def to_dense(self):
        """Writable dense copy of the full symmetric matrix."""
        f = self.full()
        return f.toarray() if self.is_sparse else np.array(f)

    def matvec(self, x):
        """Product ``A @ x`` for a vector or a stack of column vectors."""
        return self.full() @ x

    def norm(self):
        """Frobenius norm."""
        if self._norm is None:
            f = self.full()
            if self.is_sparse:
                self._norm = float(sp.linalg.norm(f))
            else:
                self._norm = float(np.linalg.norm(f))
        return self._norm

    def shifted(self, sigma):
        """``A - sigma*I`` with the same storage kind."""
        if self.is_sparse:
            coo = (self._lower - sigma * sp.identity(self.n, format="csr")).tocoo()
            return SymmetricMatrix.from_coo(self.n, coo.row, coo.col, coo.data,
                                            self.block_size)
        return SymmetricMatrix.from_dense(self._lower - sigma * np.eye(self.n))

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"SymmetricMatrix(n={self.n}, {kind})"


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues of a symmetric matrix.

    Attributes
    ----------
    eigenvalues : ndarray
        Non-decreasing eigenvalues, repeated according to multiplicity.
    complete : bool
        True when every eigenvalue of the matrix is present.
    covers : float or None
        For partial spectra: every eigenvalue strictly below this value is
        present (certified, e.g., by an inertia count).
    dimension : int or None
        Dimension of the underlying matrix, if known.
    residuals : ndarray or None
        Residual bounds from an iterative solver.
    vectors : ndarray or None
        Eigenvectors as columns, when requested.
    """

    eigenvalues: np.ndarray
    complete: bool
    dimension: int | None = None
    covers: float | None = None
    residuals: np.ndarray | None = field(default=None, compare=False)
    vectors: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1:
            raise DataError("eigenvalues must be one-dimensional")
        if ev.size > 1 and np.any(np.diff(ev) < 0):
            raise DataError("eigenvalues must be sorted non-decreasing")
        if self.complete and self.dimension is not None and ev.size != self.dimension:
            raise DataError("a complete spectrum must list every eigenvalue")
        ev = ev.copy()
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def __len__(self):
        return self.eigenvalues.size

    def includes_below(self, level):
        """Whether every eigenvalue below ``level`` is guaranteed present."""
        return self.complete or (self.covers is not None and self.covers >= level)

    def negative_count(self, threshold=0.0):
        """Number of eigenvalues strictly below ``threshold``."""
        return int(np.searchsorted(self.eigenvalues, threshold, side="left"))

    def riesz(self, gamma, shift=0.0):
        """Sum of ``(shift - lambda)^gamma`` over eigenvalues below ``shift``.

        Does not check completeness; see ``ltlab.spectral.riesz_mean``.
        """
        neg = shift - self.eigenvalues[self.eigenvalues < shift]
        if gamma == 0:
            return float(neg.size)
        return float(np.sum(neg ** gamma))
