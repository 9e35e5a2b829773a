"""Matrix trace inequality ``tr(A^s - B^s)_+^g <= tr(A - B)_+^(s g)`` and
its use for relativistic versus Schroedinger Riesz means."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import constants as C
from ..errors import ConfigurationError, DataError, DomainError, NoBoundError
from ..numerics import eig_dense
from ..operators import relativistic_matrix, schroedinger_box_matrix
from ..potentials import Potential
from .checks import DEFAULT_RTOL, _certified, _inputs, _riesz_of, default_box_grid
from .report import InequalityReport, decide

__all__ = [
    "BKSTrial",
    "evaluate_trial",
    "minimize_counterexample",
    "bks_fuzz",
    "fuzz_summary",
    "check_bks_schroedinger_chain",
    "psd_power",
]

_REF_BKS = "trace inequality tr(A^s-B^s)_+^g <= tr(A-B)_+^(s g), 0<s<1, g>=1, A,B >= 0"
_REF_CHAIN = "tr(sqrt(-Delta)-v)_-^g <= tr(-Delta-v^2)_-^(g/2), g >= 1"

OPERATOR_SLACK = 1e-9
TRACE_SLACK = 1e-9
EIG_FLOOR = 1e-12


def _eigh(a):
    s = eig_dense(0.5 * (a + a.T), vectors=True)
    return s.eigenvalues, s.vectors


def psd_power(a, s, cutoff=1e-12):
    """``a^s`` for symmetric PSD ``a`` by spectral decomposition; eigenvalues
    below ``cutoff * ||a||`` are treated as zero."""
    lam, v = _eigh(np.asarray(a, dtype=float))
    scale = max(float(np.max(np.abs(lam))), 0.0) if lam.size else 0.0
    lam = np.where(lam > cutoff * scale, lam, 0.0)
    return (v * lam ** s) @ v.T


def positive_part(a):
    """``(a)_+`` by eigen-projection."""
    lam, v = _eigh(np.asarray(a, dtype=float))
    return (v * np.clip(lam, 0.0, None)) @ v.T


@dataclass(frozen=True)
class BKSTrial:
    """One instance ``(A, B, s, gamma)`` with ``A, B >= 0``."""

    n: int
    s: float
    gamma: float
    seed: int
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise DomainError(f"s must lie in (0, 1), got {self.s}")
        if self.gamma < 1:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        for name in ("A", "B"):
            m = np.asarray(getattr(self, name), dtype=float)
            if m.shape != (self.n, self.n):
                raise DataError(f"{name} must be {self.n} x {self.n}")
            m = 0.5 * (m + m.T)
            lam = eig_dense(m).eigenvalues if self.n else np.zeros(0)
            norm = float(np.max(np.abs(lam))) if lam.size else 0.0
            if lam.size and lam[0] < -1e-12 * max(norm, 1e-300):
                raise DataError(f"{name} is not positive semidefinite (min eig {lam[0]:.3g})")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @classmethod
    def generate(cls, seed, n_range=(1, 12), s_range=(0.05, 0.95), gamma_range=(1.0, 4.0)):
        """Random trial from ``numpy.random.default_rng(seed)``.

        ``A`` and ``B`` are Gram matrices of random rank, so singular and
        nearly equal pairs occur.
        """
        rng = np.random.default_rng(seed)
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        s = float(rng.uniform(*s_range))
        g = float(rng.uniform(*gamma_range))

        def gram():
            k = int(rng.integers(1, n + 1))
            x = rng.standard_normal((n, k)) * rng.uniform(0.1, 3.0)
            return x @ x.T

        A = gram()
        kind = rng.integers(3)
        if kind == 0:
            B = gram()
        elif kind == 1:
            # B close to A
            B = A + 0.05 * gram()
        else:
            B = rng.uniform(0.1, 2.0) * A
        return cls(n, s, g, int(seed), A, B)


def evaluate_trial(t):
    """Both inequalities for one trial.

    Returns
    -------
    dict
        ``lhs``, ``rhs`` (trace inequality), ``operator_min_eig`` (smallest
        eigenvalue of ``(B + (A-B)_+)^s - A^s``, which dominates
        ``A^s - B^s`` from above once ``B^s`` is added back), ``scale`` and
        the verdicts ``trace_ok``, ``operator_ok``.
    """
    A, B, s, g = t.A, t.B, t.s, t.gamma
    if t.n == 0:
        return {"lhs": 0.0, "rhs": 0.0, "operator_min_eig": 0.0, "scale": 0.0,
                "trace_ok": True, "operator_ok": True, "trace_slack": 0.0}
    As, Bs = psd_power(A, s), psd_power(B, s)
    scale = max(float(np.max(np.abs(eig_dense(A).eigenvalues))),
                float(np.max(np.abs(eig_dense(B).eigenvalues))), 1e-300)
    # eigenvalues under the rounding floor are zero; small powers would
    # otherwise turn 1e-15 noise into visible contributions
    diff = eig_dense(0.5 * ((As - Bs) + (As - Bs).T)).eigenvalues
    diff = np.where(diff > EIG_FLOOR * scale ** s, diff, 0.0)
    lhs = float(np.sum(diff ** g))
    d_ab = eig_dense(0.5 * ((A - B) + (A - B).T)).eigenvalues
    d_ab = np.where(d_ab > EIG_FLOOR * scale, d_ab, 0.0)
    rhs = float(np.sum(d_ab ** (s * g)))
    slack = TRACE_SLACK * max(1.0, lhs, rhs)
    upper = psd_power(B + positive_part(A - B), s)
    gap = eig_dense(0.5 * ((upper - As) + (upper - As).T)).eigenvalues
    op_min = float(gap[0])
    return {"lhs": lhs, "rhs": rhs, "operator_min_eig": op_min, "scale": scale,
            "trace_ok": lhs <= rhs + slack,
            "operator_ok": op_min >= -OPERATOR_SLACK * max(1.0, scale ** s),
            "trace_slack": slack}


def _violated(t):
    r = evaluate_trial(t)
    return not (r["trace_ok"] and r["operator_ok"])


def minimize_counterexample(t, digits=(6, 3, 2, 1)):
    """Shrink a violating trial: drop indices (principal submatrices stay
    PSD) and round entries, keeping each step only if it still violates."""
    if not _violated(t):
        return t
    changed = True
    while changed and t.n > 1:
        changed = False
        for i in range(t.n):
            keep = [j for j in range(t.n) if j != i]
            cand = BKSTrial(t.n - 1, t.s, t.gamma, t.seed,
                            t.A[np.ix_(keep, keep)], t.B[np.ix_(keep, keep)])
            if _violated(cand):
                t, changed = cand, True
                break
    for k in digits:
        try:
            cand = BKSTrial(t.n, round(t.s, k) or t.s, max(round(t.gamma, k), 1.0), t.seed,
                            _round_psd(t.A, k), _round_psd(t.B, k))
        except (DataError, DomainError):
            continue
        if _violated(cand):
            t = cand
    return t


def _round_psd(a, k):
    r = np.round(a, k)
    r = 0.5 * (r + r.T)
    lam = eig_dense(r).eigenvalues
    if lam.size and lam[0] < 0:
        r = r - lam[0] * np.eye(r.shape[0])
    return r


def _report_for(t):
    r = evaluate_trial(t)
    verdict = "holds" if (r["trace_ok"] and r["operator_ok"]) else "violated"
    extra = {"operator_min_eig": r["operator_min_eig"], "operator_ok": r["operator_ok"],
             "trace_ok": r["trace_ok"], "n": t.n, "s": t.s, "seed": t.seed}
    if verdict == "violated":
        m = minimize_counterexample(t)
        extra["counterexample"] = {"n": m.n, "s": m.s, "gamma": m.gamma,
                                   "A": m.A.tolist(), "B": m.B.tolist()}
    cert = {"quantity": "matrix functions by spectral decomposition", "status": "converged",
            "error": r["trace_slack"]}
    return InequalityReport("bks", _REF_BKS, r["lhs"], r["rhs"], 1.0, verdict, [cert],
                            {"potential": None, "gamma": t.gamma, "d": None, "tau": None,
                             "grid": None, "seed": t.seed, "n": t.n, "s": t.s},
                            extra)


def bks_fuzz(trials=1000, n_range=(1, 12), s_range=(0.05, 0.95), gamma_range=(1.0, 4.0),
             seed=0, workers=1):
    """Random trials of both matrix inequalities.

    Trial ``i`` uses seed ``seed + i``, so results do not depend on
    ``workers`` and any single trial can be replayed.
    """
    if not (0 < s_range[0] <= s_range[1] < 1):
        raise DomainError("s_range must lie inside (0, 1)")
    if gamma_range[0] < 1:
        raise DomainError("gamma_range must lie in [1, inf)")
    if n_range[0] < 1 or n_range[1] < n_range[0]:
        raise ConfigurationError("bad n_range")

    def one(i):
        return _report_for(BKSTrial.generate(seed + i, n_range, s_range, gamma_range))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(trials)))
    return [one(i) for i in range(trials)]


def fuzz_summary(reports):
    """Counts of each verdict."""
    out = {"holds": 0, "violated": 0, "inconclusive": 0}
    for r in reports:
        out[r.verdict] += 1
    return out


def check_bks_schroedinger_chain(p, gamma, grid=None, rtol=DEFAULT_RTOL, refine=True):
    """``tr(sqrt(-Delta) - v)_-^gamma <= tr(-Delta - v^2)_-^(gamma/2)``.

    Both operators live on the same periodic box, where ``sqrt(-Delta)`` is
    the exact square root of the discrete ``-Delta``; with ``A = v^2`` and
    ``B = -Delta`` the matrix trace inequality at ``s = 1/2`` gives the
    discrete statement exactly. The following classical bound
    ``tr(-Delta - v^2)_-^(gamma/2) <= L_{gamma/2,d} int v^(gamma+d)`` is
    reported in ``extra`` only.
    """
    if not isinstance(p, Potential):
        raise ConfigurationError("expected a Potential")
    if gamma < 1:
        raise DomainError("the chain needs gamma >= 1")
    d = p.d
    grid = grid or default_box_grid(p)
    if p.peak == 0:
        z = {"status": "converged", "error": 0.0}
        return InequalityReport("bks-schroedinger-chain", _REF_CHAIN, 0.0, 0.0, 1.0, "holds",
                                [dict(z, quantity="lhs"), dict(z, quantity="rhs")],
                                _inputs(p, gamma, d, 0.0, grid), {})
    lhs, c_l = _certified(_riesz_of(lambda g: relativistic_matrix(p, g), gamma), grid,
                          "tr(sqrt(-Delta)-v)_-^g", rtol, refine)
    rhs, c_r = _certified(_riesz_of(lambda g: schroedinger_box_matrix(p, g), gamma / 2), grid,
                          "tr(-Delta-v^2)_-^(g/2)", rtol, refine)
    conv = c_l["status"] == "converged" and c_r["status"] == "converged"
    verdict = decide(lhs, rhs, c_l["error"] + c_r["error"], conv)
    # same inequality through the matrix functions of A = v^2, B = -Delta
    op_r = schroedinger_box_matrix(p, grid)
    vals = p(*grid.mesh())
    lap = op_r.matrix.to_dense() + np.diag(vals ** 2)
    t = BKSTrial(lap.shape[0], 0.5, float(gamma), -1, np.diag(vals ** 2), lap)
    direct = evaluate_trial(t)
    extra = {"matrix_level_lhs": direct["lhs"], "matrix_level_rhs": direct["rhs"]}
    try:
        entry = C.surface_bound_table(gamma / 2, d)
        lt = entry.factor * C.lt_classical(gamma / 2, d) * p.lp_integral(gamma + d)
        extra["classical_bound"] = {"value": lt, "factor": entry.factor,
                                    "source": entry.source, "holds": rhs <= lt}
    except NoBoundError as exc:
        extra["classical_bound"] = {"value": None, "note": str(exc)}
    return InequalityReport("bks-schroedinger-chain", _REF_CHAIN, lhs, rhs, 1.0, verdict,
                            [c_l, c_r], _inputs(p, gamma, d, 0.0, grid), extra)

