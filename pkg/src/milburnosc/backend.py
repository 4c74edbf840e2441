"""Kernel selection.

The compiled extension is used when importable.  Setting
``MILBURNOSC_BACKEND=numpy`` forces the pure-Python fallback, and
``MILBURNOSC_BACKEND=cython`` makes a missing extension an import error.
"""
import os

from . import _fallback

_choice = os.environ.get("MILBURNOSC_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numpy", "cython"):
    raise ImportError(f"MILBURNOSC_BACKEND must be auto, numpy or cython, got {_choice!r}")

_compiled = None
if _choice != "numpy":
    try:
        from . import _kernels as _compiled
    except ImportError:
        if _choice == "cython":
            raise
        _compiled = None

kernels = _compiled if _compiled is not None else _fallback
BACKEND_NAME = kernels.BACKEND_NAME
HAVE_COMPILED = _compiled is not None


def get_kernels(name=None):
    """Kernel module by name (``"cython"``, ``"numpy"``) or the active one."""
    if name is None:
        return kernels
    if name == "numpy":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available in this install")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    return ["cython", "numpy"] if HAVE_COMPILED else ["numpy"]
