"""Backend selection for the elimination kernels.

The compiled extension is used when it was built; setting
``QUADNIL_PURE_PYTHON=1`` forces the reference implementation.
"""
import os

from . import _kernels_py

if os.environ.get("QUADNIL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

bareiss_rank = _impl.bareiss_rank
bareiss_det = _impl.bareiss_det
rank_mod_p = _impl.rank_mod_p

# largest prime below 2**31; products of two residues fit in a signed 64-bit word
PRIME = 2147483647
