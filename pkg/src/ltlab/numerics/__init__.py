"""Symmetric eigensolvers, inertia counting and sparse storage.

The dense kernels (Householder, implicit QL, Bunch-Kaufman) come from a
compiled extension when it was built, otherwise from a numpy fallback;
``BACKEND`` names the active one.
"""
from ._backend import BACKEND, load_kernels
from .dense import MAX_DENSE, eig_dense, tridiagonalize
from .lanczos import eig_lanczos_lowest
from .ldl import LDLFactor, bk_inertia, factor_ldl, inertia_below
from .matrix import Spectrum, SymmetricMatrix

__all__ = [
    "BACKEND",
    "load_kernels",
    "MAX_DENSE",
    "SymmetricMatrix",
    "Spectrum",
    "eig_dense",
    "tridiagonalize",
    "eig_lanczos_lowest",
    "LDLFactor",
    "factor_ldl",
    "inertia_below",
    "bk_inertia",
]
