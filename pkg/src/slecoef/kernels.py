"""Kernel selection.

The compiled extension ``slecoef._core`` is used when it imports; otherwise
the pure-Python implementations in :mod:`slecoef._pycore` take over. Set
``SLECOEF_KERNELS=python`` to force the fallback or ``=compiled`` to make a
missing extension an error.
"""

from __future__ import annotations

import os

from . import _pycore as python_impl

try:
    from . import _core as compiled_impl
except ImportError:
    compiled_impl = None

_choice = os.environ.get("SLECOEF_KERNELS", "").strip().lower()
if _choice == "python":
    _impl = python_impl
elif _choice == "compiled":
    if compiled_impl is None:
        raise ImportError("SLECOEF_KERNELS=compiled but slecoef._core is not built")
    _impl = compiled_impl
else:
    _impl = compiled_impl if compiled_impl is not None else python_impl

BACKEND = "compiled" if _impl is compiled_impl else "python"

fill_eta_double = _impl.fill_eta_double
integrate_paths = _impl.integrate_paths
