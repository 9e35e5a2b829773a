import os
import time
from contextlib import contextmanager

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ltlab.numerics import load_kernels

settings.register_profile(
    "ltlab", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ltlab"))


def _backends():
    out = ["python"]
    try:
        load_kernels("cython")
        out.append("cython")
    except ImportError:
        pass
    return out


BACKENDS = _backends()


@pytest.fixture(params=BACKENDS)
def kernels(request):
    """Kernel module of each available backend."""
    return load_kernels(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE = {}


def record(criterion, passed, detail):
    """Store one acceptance line; printed at the end of the session."""
    ACCEPTANCE[criterion] = (bool(passed), detail)


@contextmanager
def criterion(k, budget):
    """Run one acceptance criterion: record PASS only if the body succeeds
    within ``budget`` seconds. The body fills ``info["detail"]``."""
    info = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        record(k, False, f"{info['detail']} [{type(exc).__name__}: {exc}]".strip())
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < budget
    record(k, ok, f"{info['detail']} ({elapsed:.1f} s, budget {budget:g} s)")
    assert ok, f"criterion {k} took {elapsed:.1f} s, budget {budget} s"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
