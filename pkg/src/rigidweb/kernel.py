"""Row-reduction backend selection.

The compiled kernel is used when it was built; otherwise the pure-Python
kernel.  Set ``RIGIDWEB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from rigidweb import _kernel_py

BACKEND = "python"
rref = _kernel_py.rref
rank = _kernel_py.rank

if os.environ.get("RIGIDWEB_PURE_PYTHON", "") in ("", "0"):
    try:
        from rigidweb import _kernel
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        rref = _kernel.rref
        rank = _kernel.rank

__all__ = ["BACKEND", "rref", "rank", "set_backend"]


def set_backend(name: str) -> str:
    """Switch backends at runtime ("cython" or "python"); returns the previous name."""
    global BACKEND, rref, rank
    prev = BACKEND
    if name == "python":
        mod = _kernel_py
    elif name == "cython":
        from rigidweb import _kernel as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND, rref, rank = name, mod.rref, mod.rank
    return prev
