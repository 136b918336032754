"""Kernel backend selection: compiled extension when available, pure NumPy
fallback otherwise.

The default is chosen at import time; the QLANDSCAPE_BACKEND environment
variable ("compiled", "pure", or "auto") overrides it.  Both backends
produce identical results up to floating-point library rounding; each is
bit-reproducible run to run.
"""

import os

from . import _fallback

try:
    from . import _speedups
except ImportError:
    _speedups = None

DEFAULT = _speedups if _speedups is not None else _fallback


def get(name: str | None = None):
    """Return the kernel module for ``name`` (default: env var or auto)."""
    name = name or os.environ.get("QLANDSCAPE_BACKEND", "auto")
    if name == "auto":
        return DEFAULT
    if name == "compiled":
        if _speedups is None:
            raise RuntimeError(
                "compiled backend unavailable; build the extension or set "
                "QLANDSCAPE_BACKEND=pure"
            )
        return _speedups
    if name == "pure":
        return _fallback
    raise ValueError(f"unknown backend {name!r}; use 'compiled', 'pure', or 'auto'")


def name() -> str:
    return get().NAME
