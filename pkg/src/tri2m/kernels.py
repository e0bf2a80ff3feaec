"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``TRI2M_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("TRI2M_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_kernels  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_kernels = None

active = compiled_kernels if compiled_kernels is not None else python_kernels
IMPLEMENTATION: str = active.IMPLEMENTATION

find_path = active.find_path
even_reachable = active.even_reachable
even_set = active.even_set
bnb_optimum = active.bnb_optimum
