"""Kernel selection: compiled extension if importable, else pure Python.

Set ``PHIKCORR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("PHIKCORR_PURE_PYTHON"):
    try:
        from . import _kernels as kernels  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        kernels = _pykernels

bvnu = kernels.bvnu
bvnu_grid = kernels.bvnu_grid
g_stat_batch = kernels.g_stat_batch
patefield = kernels.patefield
