"""Select the compiled Wigner kernel when available.

Set LQRES_BACKEND=python to force the numpy fallback.
"""
import os

from . import _wigner_kernel_py

BACKEND = "python"
wigner_points = _wigner_kernel_py.wigner_points

if os.environ.get("LQRES_BACKEND", "").lower() != "python":
    try:
        from . import _wigner_kernel

        wigner_points = _wigner_kernel.wigner_points
        BACKEND = "cython"
    except ImportError:
        pass
