"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable; otherwise, or when
``RISFSO_PURE_PYTHON=1``, the numpy kernels in ``_pykernels`` are used.
"""

import os

from . import _pykernels

if os.environ.get("RISFSO_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "numpy"

clgamma = _impl.clgamma
mellin_barnes = _impl.mellin_barnes
gammaincc_array = _impl.gammaincc_array
