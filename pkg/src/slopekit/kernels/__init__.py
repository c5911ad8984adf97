"""Hot kernels, compiled when available.

The GMP-backed Cython extension is used if it was built; otherwise the
pure-Python implementation is selected. Setting ``SLOPEKIT_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pure

if os.environ.get("SLOPEKIT_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    berkowitz = _compiled.berkowitz
    BACKEND = "compiled"
else:
    berkowitz = _pure.berkowitz
    BACKEND = "python"

__all__ = ["berkowitz", "BACKEND"]
