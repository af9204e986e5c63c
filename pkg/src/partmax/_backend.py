"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback.  ``PARTMAX_BACKEND=python`` forces the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("PARTMAX_BACKEND", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        kernels = _kernels
        BACKEND = "cython"


def get_kernels(name: str | None = None):
    """Kernel module by name (``"cython"`` / ``"python"``), default active."""
    if name is None:
        return kernels
    if name == "python":
        return _fallback
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
