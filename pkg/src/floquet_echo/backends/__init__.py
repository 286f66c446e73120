"""Kernel backend selection.

The compiled Cython kernel is preferred when it has been built; the
pure-numpy implementation is the fallback. Setting FLOQUET_ECHO_PURE=1 in
the environment forces the fallback (used by the benchmark and tests).
"""
from __future__ import annotations

import os

from . import pure as _pure

if os.environ.get("FLOQUET_ECHO_PURE", "") not in ("", "0"):
    _impl = _pure
    _BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        _BACKEND = "pure"

propagate_z_driven = _impl.propagate_z_driven
evolve_z_driven = _impl.evolve_z_driven


def backend_name() -> str:
    """'compiled' (Cython extension) or 'pure' (numpy fallback)."""
    return _BACKEND
