"""Kernel backend selection.

The compiled extension is used when it was built and ``DLPAPAR_PURE_PYTHON``
is unset; states wider than 64 variables always take the Python path.
"""
import os

from . import _pykernels

BACKEND = "python"
_compiled = None

if not os.environ.get("DLPAPAR_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
        BACKEND = "cython"
    except ImportError:
        _compiled = None

WIDTH = 64
_LIMIT = 1 << WIDTH


def backend_module(name=None):
    """Return the kernel module called ``name`` ('python' or 'cython')."""
    name = name or BACKEND
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    return ["python"] + (["cython"] if _compiled is not None else [])


def _pick(*masks):
    if _compiled is not None and all(m < _LIMIT for m in masks):
        return _compiled
    return _pykernels


def split_masks(rd, wr):
    return _pick(rd).split_masks(rd, wr)


def merge_masks(rd1, wr1, v1, rd2, wr2, v2):
    return _pick(rd1 | v1 | rd2 | v2).merge_masks(rd1, wr1, v1, rd2, wr2, v2)


def par_combine(v, cases, width_ok=True):
    if width_ok and _compiled is not None and v < _LIMIT:
        return _compiled.par_combine(v, cases)
    return _pykernels.par_combine(v, cases)


def valuation_variants(v, mask):
    return _pick(v | mask).valuation_variants(v, mask)
