"""Backend selection for the tridiagonal kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``DIRAC1D_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python module is used.  ``BACKEND`` names the
active choice.
"""

import os

from . import _pykernels

_force_py = os.environ.get("DIRAC1D_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

sturm_count = _impl.sturm_count
bisect_eigvals = _impl.bisect_eigvals
inverse_iteration = _impl.inverse_iteration


def get_backend(name):
    """Kernel namespace for ``name`` in {'python', 'cython'} (for benchmarks
    and cross-checks)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
