"""Kernel backend selection.

Prefers the compiled extension (_fastkernels) when it built; otherwise the
pure-numpy twin (_pykernels).  Set ROUGHDYN_FORCE_NUMPY=1 to skip the
extension, e.g. for benchmarking the fallback.
"""

import os

if os.environ.get("ROUGHDYN_FORCE_NUMPY") == "1":
    from . import _pykernels as _impl
else:
    try:
        from . import _fastkernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
frac_deriv_left_mid = _impl.frac_deriv_left_mid
frac_deriv_right_mid = _impl.frac_deriv_right_mid
holder_pair_sup = _impl.holder_pair_sup
weighted_holder_sup = _impl.weighted_holder_sup

__all__ = [
    "BACKEND",
    "frac_deriv_left_mid",
    "frac_deriv_right_mid",
    "holder_pair_sup",
    "weighted_holder_sup",
]
