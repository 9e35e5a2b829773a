"""Structured outcome of one numerical inequality check."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

__all__ = ["InequalityReport", "decide", "combine_verdicts", "VERDICTS", "REPORT_COLUMNS",
           "write_reports_csv", "reports_to_json"]

VERDICTS = ("holds", "violated", "inconclusive")


def decide(lhs, rhs, err, converged):
    """Verdict for ``lhs <= rhs`` given a certified numerical error ``err``.

    ``holds`` if ``lhs <= rhs + err``; ``violated`` if ``lhs > rhs + err``
    and the computation is converged. An unconverged computation only
    ``holds`` when the margin exceeds the error estimate
    (``lhs + err <= rhs``); otherwise it is ``inconclusive``.
    """
    if math.isinf(rhs) and rhs > 0:
        return "holds"
    if converged:
        return "holds" if lhs <= rhs + err else "violated"
    return "holds" if lhs + err <= rhs else "inconclusive"


def combine_verdicts(verdicts):
    """Worst of several verdicts: violated > inconclusive > holds."""
    verdicts = list(verdicts)
    for v in ("violated", "inconclusive"):
        if v in verdicts:
            return v
    return "holds"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


@dataclass
class InequalityReport:
    """Result of checking ``lhs <= rhs`` numerically.

    Attributes
    ----------
    name : str
        Checker name.
    paper_ref : str
        Which inequality this is, in words.
    lhs, rhs : float
    factor : float
        Constant factor used on the right (relative to the classical
        constant where there is one).
    ratio : float
        ``lhs / rhs`` (0 when both vanish).
    verdict : {"holds", "violated", "inconclusive"}
    certificates : list of dict
        Convergence evidence per computed quantity.
    inputs : dict
        ``potential``, ``gamma``, ``d``, ``tau`` and ``grid``.
    extra : dict
        Informational values that are not part of the verdict.
    """

    name: str
    paper_ref: str
    lhs: float
    rhs: float
    factor: float
    verdict: str
    certificates: list = field(default_factory=list)
    inputs: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")

    @property
    def ratio(self):
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    def to_dict(self):
        return _jsonable({
            "name": self.name,
            "paper_ref": self.paper_ref,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "factor": float(self.factor),
            "ratio": float(self.ratio),
            "verdict": self.verdict,
            "certificates": self.certificates,
            "inputs": self.inputs,
            "extra": self.extra,
        })

    def to_json(self, indent=2):
        """Deterministic JSON (sorted keys, shortest round-trip floats)."""
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


REPORT_COLUMNS = ("name", "verdict", "lhs", "rhs", "factor", "ratio", "potential", "gamma", "d",
                  "tau", "paper_ref")


def _cell(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return "" if x is None else str(x)


def write_reports_csv(reports, stream=None):
    """One row per report with the columns of ``REPORT_COLUMNS``; floats
    carry 17 significant digits."""
    own = stream is None
    if own:
        stream = io.StringIO()
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        row = []
        for c in REPORT_COLUMNS:
            if c in ("potential", "gamma", "d", "tau"):
                row.append(_cell(r.inputs.get(c)))
            else:
                row.append(_cell(float(getattr(r, c)) if c in ("lhs", "rhs", "factor", "ratio")
                                 else getattr(r, c)))
        w.writerow(row)
    return stream.getvalue() if own else None


def reports_to_json(reports, indent=2):
    """JSON array of report dictionaries, keys sorted."""
    return json.dumps([r.to_dict() for r in reports], indent=indent, sort_keys=True)
