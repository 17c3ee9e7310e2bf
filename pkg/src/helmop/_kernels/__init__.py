"""Kernel backend selection.

The hot evaluation kernel (log-scaled Bessel tables) exists twice: a compiled
Cython extension (``_fast``) and a pure-numpy fallback (``pure``) with the
same contract.  The compiled one is preferred when importable; set the
environment variable ``HELMOP_PURE=1`` to force the fallback.  Run
``python -m helmop.bench`` to compare the two.
"""

import os

from . import pure

if os.environ.get("HELMOP_PURE"):
    _impl = pure
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND_NAME
jv_log_table = _impl.jv_log_table
