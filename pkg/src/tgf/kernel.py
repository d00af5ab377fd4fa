"""Selects the tree-pair kernel at import time.

Prefers the compiled Cython extension (tgf._treepair); falls back to the
pure-Python reference (tgf.treepair).  Set TGF_PURE_PY=1 to force the
fallback, e.g. for benchmarking one against the other.
"""
import os

from . import treepair as _pure

if os.environ.get("TGF_PURE_PY"):
    _impl = _pure
else:
    try:
        from . import _treepair as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

compose_keys = _impl.compose_keys
invert_key = _impl.invert_key
IDENTITY_KEY = _pure.IDENTITY_KEY
IMPLEMENTATION = "c" if _impl is not _pure else "python"
