"""Kernel backend selection.

The compiled extension (`shocklab._kernels._core`, Cython) provides the hot
loops; the numpy implementation in `pyk` is the fallback and the reference.
Selection happens once at import: the extension is used when importable,
unless SHOCKLAB_KERNELS forces a choice ("cython" | "python").
"""

import os

from . import codes, pyk

_forced = os.environ.get("SHOCKLAB_KERNELS", "").strip().lower()

if _forced == "python":
    active = pyk
else:
    try:
        from . import _core as active  # type: ignore[no-redef]
    except ImportError:
        if _forced == "cython":
            raise ImportError(
                "SHOCKLAB_KERNELS=cython but the compiled extension is not "
                "available; build it with `pip install -e .`"
            ) from None
        active = pyk


def backend_name() -> str:
    return active.BACKEND


def get_backend(name=None):
    """Return a kernel namespace by name ('python'/'cython'), default active."""
    if name in (None, "", "active"):
        return active
    if name == "python":
        return pyk
    if name == "cython":
        from . import _core
        return _core
    raise ValueError(f"unknown kernel backend {name!r}")


__all__ = ["active", "backend_name", "codes", "get_backend", "pyk"]
