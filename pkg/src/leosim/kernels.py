"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python versions
when it is unavailable or when LEOSIM_PURE_PYTHON=1 is set.
"""
import os

if os.environ.get("LEOSIM_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        HAVE_COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl
        HAVE_COMPILED = False

schedule_frozen = _impl.schedule_frozen
gae_backward = _impl.gae_backward
