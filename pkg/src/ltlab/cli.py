"""Command-line front end.

Usage: ``ltlab [--config FILE] COMMAND [options]``. Commands:

``constants``  table of constants and bounds (CSV)
``weyl``       strong-coupling scan of Riesz means (CSV)
``duality``    Robin versus Birman-Schwinger eigenvalue counts (CSV)
``check``      one inequality checker by name (JSON report)
``bks-fuzz``   random matrix trials of the trace inequality (JSON or CSV)
``waveguide``  interval waveguide bound over a list of ``v0`` (JSON or CSV)
``sandwich``   both inequalities of the moment duality (JSON report)

Options may also come from a plain ``key = value`` file given with
``--config``; command-line flags take precedence. Artifacts go to
``--output`` (``-`` for stdout), else into ``$LTLAB_OUTPUT_DIR`` under a
per-command file name, else to stdout. A one-line summary follows.

Exit status: 0 on success (including inconclusive verdicts, which carry
their certificates), 1 on usage errors and refused inputs, 2 when an
inequality is violated, 3 on convergence failures.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path

from . import constants as C
from .errors import (
    CapacityError,
    CompletenessError,
    ConfigurationError,
    ConvergenceError,
    DataError,
    DomainError,
    NoBoundError,
    PivotError,
    TailError,
)
from .inequalities import CHECKERS, bks_fuzz, fuzz_summary, reports_to_json, write_reports_csv
from .operators import BoxGrid, HalfSpaceGrid, duality_counts
from .potentials import parse_potential
from .spectral import weyl_builder, weyl_grid, weyl_scan, write_scan_csv

__all__ = ["main", "RunConfig", "load_config_file", "build_parser", "run"]

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CONVERGENCE = 0, 1, 2, 3
OUTPUT_ENV = "LTLAB_OUTPUT_DIR"
COMMANDS = ("constants", "weyl", "duality", "check", "bks-fuzz", "waveguide", "sandwich")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated settings for one command."""

    command: str
    checker: str | None = None
    potential: str | None = None
    gamma: str | None = None
    d: str | None = None
    tau: float | None = None
    rho: float | None = None
    m: float | None = None
    L: float | None = None
    M: int | None = None
    X: float | None = None
    Y: float | None = None
    nx: int | None = None
    ny: int | None = None
    kind: str | None = None
    alphas: str | None = None
    taus: str | None = None
    v0: float | None = None
    v0s: str | None = None
    L_omega: float | None = None
    trials: int | None = None
    n_max: int | None = None
    seed: int | None = None
    workers: int | None = None
    rtol: float | None = None
    no_refine: bool | None = None
    output: str | None = None
    format: str | None = None


_INT_KEYS = {"M", "nx", "ny", "trials", "n_max", "seed", "workers"}
_FLOAT_KEYS = {"tau", "rho", "m", "L", "X", "Y", "v0", "L_omega", "rtol"}
_BOOL_KEYS = {"no_refine"}
_KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def _convert(key, value):
    if value is None:
        return None
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            v = float(value)
            if not math.isfinite(v):
                raise ValueError
            return v
        if key in _BOOL_KEYS:
            if isinstance(value, bool):
                return value
            if str(value).strip().lower() in ("1", "true", "yes", "on"):
                return True
            if str(value).strip().lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None
    return str(value)


def load_config_file(path):
    """Read ``key = value`` lines; ``#`` starts a comment. Keys use the
    option names with ``-`` or ``_``."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if not eq:
            raise UsageError(f"{path}:{n}: expected key = value")
        if key == "command":
            out[key] = val.strip()
            continue
        if key not in _KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = val.strip()
    return out


def _floats(text, name):
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        vals = [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--{name} must be a comma-separated list of numbers") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"--{name} must list finite numbers")
    return vals


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="ltlab", description="Numerical checks of Lieb-Thirring type "
                "inequalities for surface and relativistic operators.")
    p.add_argument("--config", help="key = value file; flags override it")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--output", "-o", help="output file ('-' for stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--workers", type=int)

    def grids(sp):
        sp.add_argument("--L", type=float, help="half length of the periodic box")
        sp.add_argument("--M", type=int, help="grid points per axis of the box")
        sp.add_argument("--X", type=float, help="half width of the half-space domain")
        sp.add_argument("--Y", type=float, help="depth of the half-space domain")
        sp.add_argument("--nx", type=int)
        sp.add_argument("--ny", type=int)
        sp.add_argument("--rtol", type=float, help="refinement tolerance of certificates")
        sp.add_argument("--no-refine", action="store_const", const=True,
                        help="skip refinement certificates")

    sp = sub.add_parser("constants", help="table of constants and bounds")
    sp.add_argument("--gamma", help="comma-separated gamma values")
    sp.add_argument("--d", help="comma-separated dimensions")
    common(sp)

    sp = sub.add_parser("weyl", help="strong-coupling scan")
    sp.add_argument("--kind", choices=("surface", "relativistic"))
    sp.add_argument("--potential")
    sp.add_argument("--gamma")
    sp.add_argument("--alphas")
    grids(sp)
    common(sp)

    sp = sub.add_parser("duality", help="Robin versus Birman-Schwinger counts")
    sp.add_argument("--potential")
    sp.add_argument("--taus")
    grids(sp)
    common(sp)

    sp = sub.add_parser("check", help="run one inequality checker")
    sp.add_argument("checker", nargs="?", help=", ".join(sorted(CHECKERS)))
    sp.add_argument("--potential")
    sp.add_argument("--gamma")
    sp.add_argument("--d")
    sp.add_argument("--tau", type=float)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--m", type=float)
    sp.add_argument("--v0", type=float)
    sp.add_argument("--L-omega", dest="L_omega", type=float)
    grids(sp)
    common(sp)

    sp = sub.add_parser("bks-fuzz", help="random matrix trials")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--n-max", dest="n_max", type=int)
    sp.add_argument("--seed", type=int)
    common(sp)

    sp = sub.add_parser("waveguide", help="interval waveguide bound")
    sp.add_argument("--L-omega", dest="L_omega", type=float)
    sp.add_argument("--v0s")
    sp.add_argument("--gamma")
    common(sp)

    sp = sub.add_parser("sandwich", help="moment duality sandwich")
    sp.add_argument("--potential")
    sp.add_argument("--gamma")
    sp.add_argument("--rho", type=float)
    grids(sp)
    common(sp)
    return p


def parse_config(argv):
    """Merge flags over an optional config file into a :class:`RunConfig`."""
    argv = list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    file_vals = load_config_file(known.config) if known.config else {}
    file_command = file_vals.pop("command", None)
    if file_command and not any(a in COMMANDS for a in argv):
        # the subcommand comes from the file; splice it in after --config
        i = argv.index("--config") + 2 if "--config" in argv else 0
        argv[i:i] = [file_command]
    ns = build_parser().parse_args(argv)
    command = ns.command
    if command not in COMMANDS:
        raise UsageError(f"expected a command: {', '.join(COMMANDS)}")
    merged = {}
    for key in _KEYS:
        flag = getattr(ns, key, None)
        merged[key] = _convert(key, flag if flag is not None else file_vals.get(key))
    cfg = RunConfig(command=command, **merged)
    _validate(cfg)
    return cfg


def _validate(cfg):
    if cfg.workers is not None and cfg.workers < 1:
        raise UsageError("--workers must be >= 1")
    if cfg.M is not None and cfg.M < 2:
        raise UsageError("--M must be >= 2")
    for key in ("L", "X", "Y", "L_omega", "rtol"):
        v = getattr(cfg, key)
        if v is not None and not v > 0:
            raise UsageError(f"--{key} must be positive")
    for key in ("nx", "ny", "trials", "n_max"):
        v = getattr(cfg, key)
        if v is not None and v < 1:
            raise UsageError(f"--{key} must be >= 1")
    if cfg.tau is not None and cfg.tau < 0:
        raise UsageError("--tau must be >= 0")
    if cfg.m is not None and cfg.m < 0:
        raise UsageError("--m must be >= 0")
    if cfg.command == "check":
        if cfg.checker is None:
            raise UsageError("check needs a checker name: " + ", ".join(sorted(CHECKERS)))
        if cfg.checker not in CHECKERS:
            raise UsageError(f"unknown checker {cfg.checker!r}; choose from "
                             + ", ".join(sorted(CHECKERS)))


# ---------------------------------------------------------------------------
# helpers


def _one_float(text, name, default=None):
    if text is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return default
    vals = _floats(text, name)
    if len(vals) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return vals[0]


def _potential(cfg, required=True, default=None):
    spec = cfg.potential or default
    if spec is None:
        if required:
            raise UsageError("--potential is required")
        return None
    if cfg.d is not None and "d=" not in spec:
        spec = spec + ("," if ":" in spec else ":") + f"d={int(_one_float(cfg.d, 'd'))}"
    return parse_potential(spec)


def _box(cfg, d):
    if cfg.L is None and cfg.M is None:
        return None
    if cfg.L is None or cfg.M is None:
        raise UsageError("--L and --M go together")
    return BoxGrid(d, cfg.L, cfg.M)


def _halfspace(cfg):
    vals = (cfg.X, cfg.Y, cfg.nx, cfg.ny)
    if all(v is None for v in vals):
        return None
    if any(v is None for v in vals):
        raise UsageError("--X, --Y, --nx and --ny go together")
    return HalfSpaceGrid(cfg.X, cfg.Y, cfg.nx, cfg.ny)


def _refine_kw(cfg):
    kw = {"refine": not cfg.no_refine}
    if cfg.rtol is not None:
        kw["rtol"] = cfg.rtol
    return kw


def _status(reports):
    verdicts = {r.verdict for r in reports}
    return EXIT_VIOLATION if "violated" in verdicts else EXIT_OK


# ---------------------------------------------------------------------------
# commands; each returns (artifact text, default file name, summary, status)


def _cmd_constants(cfg):
    gammas = _floats(cfg.gamma or "0,0.5,1,1.5", "gamma")
    dims = [int(x) for x in _floats(cfg.d or "1,2,3", "d")]
    pairs = [(g, d) for g in gammas for d in dims]
    text = C.dump_constants_csv(pairs)
    g, d = pairs[0]
    head = f"gamma={g:.17g} d={d}: L_cl={C.lt_classical(g, d):.17g}"
    try:
        e = C.surface_bound_table(g, d)
        head += f", surface factor {e.factor:.17g} ({e.kind})"
    except NoBoundError as exc:
        head += f", no surface bound: {exc}"
    return text, "constants.csv", f"{head}; {len(pairs)} (gamma, d) pairs", EXIT_OK


def _cmd_weyl(cfg):
    kind = cfg.kind or "relativistic"
    p = _potential(cfg, default="gaussian:amp=1,width=1")
    gamma = _one_float(cfg.gamma, "gamma", 1.0)
    alphas = _floats(cfg.alphas or "1,2,4,8,16,32", "alphas")
    kw = _refine_kw(cfg)
    build = weyl_builder(kind, p, gamma, lambda a: weyl_grid(kind, p, a, cfg.L, cfg.M), **kw)
    base = p.with_coupling(1.0)
    norm = base.lp_integral(2 * gamma + p.d if kind == "surface" else gamma + p.d)
    pts = weyl_scan(build, gamma, alphas, norm, kind, d=p.d, workers=cfg.workers or 1)
    bad = []
    if kind == "surface" and gamma >= 1.5:
        bad = [pt.alpha for pt in pts if pt.exceeds(1.0)]
    last = pts[-1]
    summary = (f"{kind} weyl scan gamma={gamma:.17g}: ratio {last.ratio:.17g} at "
               f"alpha={last.alpha:.17g}; {sum(pt.converged for pt in pts)}/{len(pts)} converged")
    if bad:
        summary += f"; ratio above the sharp bound at alpha={bad}"
    return write_scan_csv(pts), "weyl.csv", summary, EXIT_VIOLATION if bad else EXIT_OK


def _cmd_duality(cfg):
    p = _potential(cfg)
    taus = _floats(cfg.taus or "0.01,0.05,0.1", "taus")
    from .inequalities import default_halfspace_grid

    hs = _halfspace(cfg) or default_halfspace_grid(p)
    box = _box(cfg, p.d) or BoxGrid(p.d, 100.0, 4096)
    rows = duality_counts(p, taus, hs, box)
    lines = ["tau,robin_count,bs_count,equal"]
    lines += [f"{r['tau']:.17g},{r['robin']},{r['bs']},{'true' if r['equal'] else 'false'}"
              for r in rows]
    ok = all(r["equal"] for r in rows)
    summary = ("duality counts agree at all " if ok else "duality counts DIFFER at some of ") \
        + f"{len(rows)} tau values"
    return "\n".join(lines) + "\n", "duality.csv", summary, EXIT_OK if ok else EXIT_CONVERGENCE


_HALFSPACE_CHECKERS = {"surface-lt", "sharp-shifted"}
_BOX_CHECKERS = {"relativistic-lt", "duality-sandwich", "massive", "bks-schroedinger-chain",
                 "lower-bound-certificate"}


def _reject_foreign_grid(name, cfg):
    box = any(getattr(cfg, k) is not None for k in ("L", "M"))
    half = any(getattr(cfg, k) is not None for k in ("X", "nx"))
    if name in _HALFSPACE_CHECKERS and box:
        raise UsageError(f"{name} uses a half-space grid (--X, --Y, --nx, --ny), not --L/--M")
    if name in _BOX_CHECKERS and (half or cfg.Y is not None or cfg.ny is not None):
        raise UsageError(f"{name} uses a periodic box (--L, --M)")
    if name == "waveguide" and (box or half):
        raise UsageError("waveguide takes no grid options")


def _run_checker(name, cfg):
    f = CHECKERS[name]
    _reject_foreign_grid(name, cfg)
    kw = {}
    if name == "waveguide":
        return f(cfg.L_omega or math.pi, cfg.v0 if cfg.v0 is not None else 2.0,
                 _one_float(cfg.gamma, "gamma", 1.0))
    if name == "lower-bound-certificate":
        d = int(_one_float(cfg.d, "d", 2))
        trial = _potential(cfg, required=False)
        return f(d, _box(cfg, d), trial, **({"rtol": cfg.rtol} if cfg.rtol else {}))
    kw.update(_refine_kw(cfg))
    if name == "sharp-shifted" and cfg.potential is None and cfg.v0 is not None:
        grid = (cfg.Y, cfg.ny) if cfg.Y is not None and cfg.ny is not None else None
        return f(cfg.v0, _one_float(cfg.gamma, "gamma"), cfg.tau or 0.0, grid, **kw)
    p = _potential(cfg)
    if name == "massive":
        kw.pop("rtol", None)
        return f(p, cfg.m if cfg.m is not None else 0.0, _box(cfg, p.d), **kw)
    gamma = _one_float(cfg.gamma, "gamma")
    if name in ("surface-lt",):
        return f(p, gamma, _halfspace(cfg), **kw)
    if name == "sharp-shifted":
        return f(p, gamma, cfg.tau or 0.0, _halfspace(cfg), **kw)
    if name == "duality-sandwich":
        return f(p, gamma, cfg.rho, _box(cfg, p.d), **kw)
    return f(p, gamma, _box(cfg, p.d), **kw)


def _report_artifact(reports, cfg, single):
    if (cfg.format or "json") == "csv":
        return write_reports_csv(reports), "csv"
    if single:
        return reports[0].to_json() + "\n", "json"
    return reports_to_json(reports) + "\n", "json"


def _cmd_check(cfg):
    r = _run_checker(cfg.checker, cfg)
    text, ext = _report_artifact([r], cfg, True)
    summary = f"{r.name}: {r.verdict} (lhs {r.lhs:.17g}, rhs {r.rhs:.17g}, ratio {r.ratio:.17g})"
    return text, f"check-{r.name}.{ext}", summary, _status([r])


def _cmd_sandwich(cfg):
    cfg.checker = "duality-sandwich"
    if cfg.potential is None:
        cfg.potential = "gaussian:amp=2,width=1"
    if cfg.gamma is None:
        cfg.gamma = "1"
    text, _, summary, status = _cmd_check(cfg)
    return text, "sandwich." + ("csv" if cfg.format == "csv" else "json"), summary, status


def _cmd_bks(cfg):
    reps = bks_fuzz(cfg.trials or 1000, (1, cfg.n_max or 12), seed=cfg.seed or 0,
                    workers=cfg.workers or 1)
    counts = fuzz_summary(reps)
    text, ext = _report_artifact(reps, cfg, False)
    summary = (f"bks-fuzz: {len(reps)} trials, {counts['violated']} violations, "
               f"{counts['holds']} hold")
    return text, f"bks-fuzz.{ext}", summary, _status(reps)


def _cmd_waveguide(cfg):
    gamma = _one_float(cfg.gamma, "gamma", 1.0)
    L = cfg.L_omega or math.pi
    reps = [CHECKERS["waveguide"](L, v0, gamma)
            for v0 in _floats(cfg.v0s or "2,5,10,50", "v0s")]
    text, ext = _report_artifact(reps, cfg, False)
    last = reps[-1]
    summary = (f"waveguide gamma={gamma:.17g}: {sum(r.verdict == 'holds' for r in reps)}/"
               f"{len(reps)} hold; ratio {last.ratio:.17g} at the last v0")
    return text, f"waveguide.{ext}", summary, _status(reps)


_DISPATCH = {
    "constants": _cmd_constants,
    "weyl": _cmd_weyl,
    "duality": _cmd_duality,
    "check": _cmd_check,
    "bks-fuzz": _cmd_bks,
    "waveguide": _cmd_waveguide,
    "sandwich": _cmd_sandwich,
}


def run(cfg, stdout=None, stderr=None):
    """Execute a configuration; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    text, name, summary, status = _DISPATCH[cfg.command](cfg)
    target = cfg.output
    if target is None and os.environ.get(OUTPUT_ENV):
        target = str(Path(os.environ[OUTPUT_ENV]) / name)
    if target is None or target == "-":
        stdout.write(text)
        stdout.flush()
        print(summary, file=stderr)
    else:
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"{summary} [{path}]", file=stdout)
    return status


def main(argv=None):
    """Entry point of the ``ltlab`` command; returns the exit status."""
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return run(cfg)
    except UsageError as exc:
        print(f"ltlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoBoundError, DomainError, ConfigurationError, DataError, CapacityError) as exc:
        print(f"ltlab: refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, CompletenessError, TailError, PivotError) as exc:
        print(f"ltlab: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
