"""Select the compiled kernels when built, else the numpy fallback.

Set ``EBILLIARD_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("EBILLIARD_PURE_PYTHON") == "1":
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        from . import _pykernels as kernels

BACKEND = "cython" if kernels.__name__.endswith("_ckernels") else "python"

STATUS_OK = 0
STATUS_INFINITY = 1
STATUS_UNDEFINED = 2

__all__ = ["kernels", "BACKEND", "STATUS_OK", "STATUS_INFINITY", "STATUS_UNDEFINED"]
