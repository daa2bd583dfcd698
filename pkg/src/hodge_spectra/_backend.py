"""Kernel backend selection.

The compiled extension is used when importable; otherwise the numpy/scipy
kernels.  ``HODGE_SPECTRA_BACKEND=python`` forces the fallback.
"""

import importlib
import logging
import os

log = logging.getLogger(__name__)

_NAMES = {"compiled": "hodge_spectra._kernels", "python": "hodge_spectra._kernels_py"}


def load(name=None):
    """Return the kernel module named ``name`` ('compiled' or 'python')."""
    if name is None:
        return kernels
    if name not in _NAMES:
        raise ValueError(f"unknown backend {name!r}")
    return importlib.import_module(_NAMES[name])


def available():
    out = ["python"]
    try:
        importlib.import_module(_NAMES["compiled"])
    except ImportError:
        pass
    else:
        out.insert(0, "compiled")
    return out


def _select():
    wanted = os.environ.get("HODGE_SPECTRA_BACKEND", "").strip().lower()
    if wanted == "python":
        return "python", load("python")
    try:
        return "compiled", load("compiled")
    except ImportError:
        if wanted == "compiled":
            raise
        log.debug("compiled kernels unavailable, using numpy fallback")
        return "python", load("python")


BACKEND, kernels = _select()
