"""Backend selection for the integration kernels.

The compiled extension is preferred; the pure-Python twin is the fallback.
Set MORSE_PURE_PYTHON=1 to force the fallback (used by the kernel
benchmark and the parity tests).
"""

import os

STATUS_OK = 0
STATUS_ESCAPED = 1
STATUS_STEP_LIMIT = 2
STATUS_BLOWUP = 3

if os.environ.get("MORSE_PURE_PYTHON", "") not in ("", "0"):
    from . import rk_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _rk as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import rk_py as _impl

        BACKEND = "python"

propagate = _impl.propagate
arclength = _impl.arclength
ld_row = _impl.ld_row
