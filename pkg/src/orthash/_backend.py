"""Pick the kernel implementation at import time.

The compiled extension is preferred. Setting ``ORTHASH_PURE=1`` forces the
numpy/pure-Python kernels, as does a missing or broken build.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

python_kernels: ModuleType = _pykernels
compiled_kernels: ModuleType | None

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("ORTHASH_PURE", "") in ("", "0"):
    kernels: ModuleType = compiled_kernels
else:
    kernels = python_kernels

BACKEND: str = kernels.NAME


def available() -> list[ModuleType]:
    """All importable kernel modules, compiled first."""
    return [k for k in (compiled_kernels, python_kernels) if k is not None]
