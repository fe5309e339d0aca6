"""Backend selection for the closure kernel.

The compiled extension is used when it was built and the universe fits in
a byte; set ``MALCEVLAB_PURE=1`` to force the numpy fallback.
"""

from __future__ import annotations

import os

from . import _closure_py

try:
    if os.environ.get("MALCEVLAB_PURE"):
        raise ImportError("pure backend forced")
    from . import _closure as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def closure(size, ops, seeds, cap, backend=None):
    """Dispatch to the selected kernel.  ``backend`` may force one by name."""
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled closure kernel is not available")
        if size <= 256:
            return _compiled.closure(size, ops, seeds, cap)
    return _closure_py.closure(size, ops, seeds, cap)
