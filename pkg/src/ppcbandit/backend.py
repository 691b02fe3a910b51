"""Selection of the compiled round loop.

The package ships a Cython extension for the hot per-round loops of the
fixed-bid mechanisms. When it is missing (or ``PPCBANDIT_PURE=1`` is set)
the simulator falls back to the pure-Python engines in `mechanisms`; the
two paths are arithmetic-identical and covered by parity tests.
"""

from __future__ import annotations

import os

_kernel = None
_checked = False


def kernel():
    """The compiled loop module, or None when running pure-Python."""
    global _kernel, _checked
    if os.environ.get("PPCBANDIT_PURE") == "1":
        return None
    if not _checked:
        try:
            from . import _loops  # type: ignore[attr-defined]

            _kernel = _loops
        except ImportError:
            _kernel = None
        _checked = True
    return _kernel


def backend_name() -> str:
    return "compiled" if kernel() is not None else "pure"
