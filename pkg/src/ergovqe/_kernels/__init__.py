"""Backend selection for the cost/gradient/ascent kernels.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded.  ``ERGOVQE_BACKEND=python`` forces the fallback and
``ERGOVQE_BACKEND=cython`` makes a missing extension an import error.
"""

import os

from . import _pykernel

_choice = os.environ.get("ERGOVQE_BACKEND", "auto").lower()
if _choice not in ("auto", "cython", "python"):
    raise ImportError(f"ERGOVQE_BACKEND must be auto, cython or python, got {_choice!r}")

_compiled = None
if _choice != "python":
    try:
        from . import _ckernel as _compiled
    except ImportError:
        if _choice == "cython":
            raise

active = _compiled if _compiled is not None else _pykernel
BACKEND = active.BACKEND

energy = active.energy
shift_gradient = active.shift_gradient
ascend = active.ascend
energies = active.energies
shift_gradients = active.shift_gradients


def available_backends():
    """Kernel modules importable in this environment, keyed by name."""
    found = {"python": _pykernel}
    if _compiled is not None:
        found["cython"] = _compiled
    return found
