"""Kernel backend selection.

The hot kernels (incomplete gamma/beta evaluation and the Beta-product
log-CDF) exist twice: a compiled Cython extension and a pure numpy
fallback with identical signatures and matching algorithms.  The compiled
core is used when importable; set ``CUETRUNC_PURE=1`` to force the
fallback (useful for benchmarking and debugging).
"""

import os

from . import pure

if os.environ.get("CUETRUNC_PURE", "") == "1":
    _impl = pure
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

BACKEND = _impl.NAME

tau = _impl.tau
gammainc_p = _impl.gammainc_p
gammainc_p_log = _impl.gammainc_p_log
gammainc_p_many = _impl.gammainc_p_many
betainc_reg = _impl.betainc_reg
beta_factor_logcdf = _impl.beta_factor_logcdf


def available_backends():
    """Name -> module for every importable backend (for tests/benchmarks)."""
    found = {"pure": pure}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        found["compiled"] = _ckernels
    except ImportError:
        pass
    return found
