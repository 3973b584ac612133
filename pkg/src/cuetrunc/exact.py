"""Exact finite-n distribution of the spectral radius.

The squared radius of the truncated block is distributed as the maximum of
p independent Beta(i, k) variables (i = 1..p), so its CDF at radius r is
the product of the p regularized incomplete beta factors at r^2.  All
products run in log domain through the kernel backend.
"""

import math

from . import _backend
from .errors import ConvergenceError, DomainError
from .normalization import EnsembleSpec, Normalization

QUANTILE_TOL = 1e-10
_BRACKET_SCALES = 10.0


def radius_log_cdf(spec: EnsembleSpec, r: float) -> float:
    """log of radius_cdf; -inf at r <= 0."""
    if r < 0.0 or r > 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {r}")
    return _backend.beta_factor_logcdf(r, spec.p, spec.k)


def radius_cdf(spec: EnsembleSpec, r: float) -> float:
    """P(spectral radius <= r): the exact Beta-product law."""
    return math.exp(radius_log_cdf(spec, r))


def radius_quantile(spec: EnsembleSpec, q: float,
                    norm: Normalization | None = None) -> float:
    """Radius r with radius_cdf(spec, r) = q, by bisection.

    When a Normalization is supplied, bisection starts from the window
    A -/+ 10 B (clipped to [0, 1]);  the window always brackets in
    practice and the code falls back to [0, 1] if it does not.  Stops at
    |cdf - q| <= QUANTILE_TOL, or earlier if the bracket collapses to
    adjacent floats (possible for very large n where a one-ulp step in r
    moves the CDF by more than the tolerance).
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q}")
    lo, hi = 0.0, 1.0
    if norm is not None:
        wlo = max(0.0, norm.A - _BRACKET_SCALES * norm.B)
        whi = min(1.0, norm.A + _BRACKET_SCALES * norm.B)
        if radius_cdf(spec, wlo) <= q <= radius_cdf(spec, whi):
            lo, hi = wlo, whi
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        f = radius_cdf(spec, mid)
        if abs(f - q) <= QUANTILE_TOL:
            return mid
        if f < q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 2.0 * math.ulp(mid):
            return 0.5 * (lo + hi)
    raise ConvergenceError(f"quantile bisection stalled at q={q} for n={spec.n}")


def standardized_cdf(spec: EnsembleSpec, norm: Normalization, x: float,
                     return_clamped: bool = False):
    """radius_cdf at A + B x: the finite-n law in standardized coordinates.

    A + B x outside [0, 1] is clamped to the boundary; pass
    return_clamped=True to receive (value, clamped_flag).
    """
    r = norm.A + norm.B * x
    clamped = False
    if r < 0.0:
        r, clamped = 0.0, True
    elif r > 1.0:
        r, clamped = 1.0, True
    value = radius_cdf(spec, r)
    if return_clamped:
        return value, clamped
    return value
