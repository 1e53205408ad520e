"""Backend selection: compiled extension if available, NumPy otherwise.

Set REVPAIR2D_BACKEND=c or REVPAIR2D_BACKEND=python to force a choice;
forcing "c" raises if the extension is missing instead of silently
falling back.
"""

import os

_requested = os.environ.get("REVPAIR2D_BACKEND", "").strip().lower()

if _requested not in ("", "c", "python"):
    raise ImportError(
        "REVPAIR2D_BACKEND must be 'c' or 'python', got %r" % _requested)

if _requested == "python":
    from . import _corepy as core
else:
    try:
        from . import _core as core
    except ImportError:
        if _requested == "c":
            raise ImportError(
                "REVPAIR2D_BACKEND=c but the compiled extension "
                "revpair2d._core is not built")
        from . import _corepy as core

BACKEND_NAME = core.BACKEND_NAME


def get_backend(name):
    """Return a specific backend module ('c' or 'python') for comparison."""
    if name == "python":
        from . import _corepy
        return _corepy
    if name == "c":
        from . import _core
        return _core
    raise ValueError("unknown backend %r" % name)
