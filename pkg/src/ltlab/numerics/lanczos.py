"""Lanczos iteration with full reorthogonalization."""
import numpy as np

from ..errors import ConfigurationError, ConvergenceError
from . import _backend
from .ldl import factor_ldl
from .matrix import Spectrum, SymmetricMatrix

__all__ = ["eig_lanczos_lowest"]

MAX_K = 40


def _ritz(alpha, beta, kernels):
    """Eigenvalues of the Lanczos tridiagonal and last components of its
    eigenvectors."""
    m = alpha.size
    d = np.array(alpha, dtype=float)
    e = np.zeros(m)
    e[:m - 1] = beta[:m - 1]
    z = np.zeros((1, m))
    z[0, m - 1] = 1.0
    info = kernels.tql_implicit(d, e, z)
    if info:
        raise ConvergenceError("QL failed on the Lanczos tridiagonal")
    order = np.argsort(d)
    return d[order], z[0, order]


def eig_lanczos_lowest(A, k=6, tol=1e-8, sigma=None, seed=0, max_iter=None,
                       kernels=None):
    """The ``k`` smallest eigenvalues of a symmetric matrix.

    Parameters
    ----------
    A : SymmetricMatrix
        Usually sparse; dense storage also works.
    k : int
        Number of eigenvalues, 1 <= k <= 40.
    tol : float
        Absolute accuracy target for each eigenvalue, enforced through the
        Ritz residual bound.
    sigma : float, optional
        If given, iterate with ``(A - sigma I)^{-1}`` (shift-invert). ``sigma``
        must lie strictly below the spectrum; this is confirmed from the
        inertia of the factorization.
    seed : int
        Seed for the starting vector.
    max_iter : int, optional
        Krylov dimension cap, default ``min(n, max(20 k, 300))``.

    Returns
    -------
    Spectrum
        ``complete=False``; ``residuals`` holds the final error bounds.

    Raises
    ------
    ConvergenceError
        If the cap is reached first. ``residuals`` carries the best bounds.
    """
    kern = kernels or _backend.kernels
    if not isinstance(A, SymmetricMatrix):
        A = SymmetricMatrix.from_dense(A)
    n = A.n
    if not 1 <= k <= MAX_K:
        raise ConfigurationError(f"k must lie in [1, {MAX_K}], got {k}")
    if k > n:
        raise ConfigurationError(f"k={k} exceeds the dimension {n}")
    if max_iter is None:
        max_iter = max(20 * k, 300)
    m_cap = min(n, int(max_iter))

    if sigma is not None:
        fac = factor_ldl(A, sigma, keep=True, kernels=kernels)
        if fac.inertia[0] or fac.inertia[1]:
            raise ConfigurationError(
                f"shift {sigma} is not below the spectrum "
                f"({fac.inertia[0]} eigenvalues lie below it)"
            )
        op = fac.solve
    else:
        op = A.matvec

    rng = np.random.default_rng(seed)
    V = np.zeros((n, m_cap + 1))
    alpha = np.zeros(m_cap)
    beta = np.zeros(m_cap)
    q = rng.standard_normal(n)
    V[:, 0] = q / np.linalg.norm(q)
    scale = A.norm() if sigma is None else 1.0
    best = None
    check_every = 5
    for j in range(m_cap):
        w = op(V[:, j])
        alpha[j] = V[:, j] @ w
        basis = V[:, :j + 1]
        for _ in range(2):
            w -= basis @ (basis.T @ w)
        b = np.linalg.norm(w)
        beta[j] = b
        done = j + 1 == m_cap
        if b <= 1e-12 * max(scale, abs(alpha[j]), 1e-300):
            # invariant subspace: restart with a fresh orthogonal direction
            beta[j] = 0.0
            if not done:
                q = rng.standard_normal(n)
                for _ in range(2):
                    q -= basis @ (basis.T @ q)
                qn = np.linalg.norm(q)
                if qn < 1e-10:
                    done = True
                else:
                    V[:, j + 1] = q / qn
        else:
            V[:, j + 1] = w / b
        m = j + 1
        if m < k or not (done or m % check_every == 0):
            continue
        theta, s_last = _ritz(alpha[:m], beta[:m], kern)
        res = np.abs(beta[j] * s_last)
        if sigma is None:
            lam = theta[:k]
            err = res[:k]
        else:
            # largest theta <-> smallest eigenvalue sigma + 1/theta
            sel = np.argsort(-theta)[:k]
            th = theta[sel]
            lam = sigma + 1.0 / th
            err = res[sel] / th ** 2
            order = np.argsort(lam)
            lam, err = lam[order], err[order]
        best = (lam, err)
        if np.all(err <= tol):
            return Spectrum(np.sort(lam), False, n, residuals=err)
        if done:
            break
    raise ConvergenceError(
        f"Lanczos did not reach tol={tol} within {m_cap} iterations",
        residuals=None if best is None else best[1],
    )
