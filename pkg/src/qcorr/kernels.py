"""Backend selection for the hot kernels.

The compiled extension is used when importable; otherwise the pure-Python
twin. Set ``QCORR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _jacobi_py

BACKENDS = {"python": _jacobi_py}

try:
    from . import _jacobi as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and not os.environ.get("QCORR_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

jacobi_eigh = _impl.jacobi_eigh
tmin_objective = _impl.tmin_objective
skew_objective = _impl.skew_objective


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    if name is None:
        name = BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None
