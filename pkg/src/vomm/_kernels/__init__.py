"""Kernel backend selection.

The compiled backend (Cython) is preferred when it imported cleanly; the
pure-Python module is the reference implementation and the fallback.  Set
VOMM_PURE_PYTHON=1 to force the pure backend regardless.
"""

import os

from . import pure

if os.environ.get("VOMM_PURE_PYTHON"):
    backend = pure
else:
    try:
        from . import _native as backend  # type: ignore[no-redef]
    except ImportError:
        backend = pure

BACKEND_NAME: str = backend.BACKEND_NAME
LzTrie = backend.LzTrie
PpmTrie = backend.PpmTrie
ContextTreeModel = backend.ContextTreeModel
ContextTreeSession = backend.ContextTreeSession


def available_backends() -> dict:
    """Name -> module for every importable backend."""
    out = {"pure": pure}
    try:
        from . import _native  # noqa: PLC0415

        out["native"] = _native
    except ImportError:
        pass
    return out
