"""Backend selection for the integer elimination kernels.

The compiled ``_kernels`` module is used when it was built; otherwise, or when
``HYPOSHIFT_PURE_PYTHON`` is set, the pure-Python twins are loaded.
"""

import os

from . import _pykernels

if os.environ.get("HYPOSHIFT_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

ldl_psd = _impl.ldl_psd
bareiss_det = _impl.bareiss_det
