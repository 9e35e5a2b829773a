"""Select the compiled kernels when available, else the numpy fallback.

Setting ``LTLAB_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if os.environ.get("LTLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"


def load_kernels(name):
    """Return the kernel module named ``"python"`` or ``"cython"``.

    Raises ImportError if the compiled extension was not built.
    """
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
