"""Pure-Python/numpy kernels.

Fallback implementations of the hot numerical kernels, mirrored by the
compiled extension ``_ckernels``.  Scalar entry points use plain ``math``;
the grid/array entry points are vectorised with numpy.

All incomplete-gamma/beta evaluations keep the ``z^a e^-z / Gamma(a)``
style prefactors in log domain: the workloads routinely involve exponents
of magnitude 10^3, far past double underflow.
"""

import math

import numpy as np

from ..errors import ConvergenceError, DomainError

NAME = "pure"

_LOG_2PI = math.log(2.0 * math.pi)

# Stirling series for lgamma(a) - [(a-1/2)log(a) - a + log(2*pi)/2],
# coefficients B_{2j} / (2j(2j-1)); valid to ~1e-17 absolute for a >= 12.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)

# tau(1+u) = u - log1p(u) = u^2 * (1/2 - u/3 + u^2/4 - ...): series used
# near u = 0 where the direct form cancels.
_TAU_SERIES = (1 / 2, -1 / 3, 1 / 4, -1 / 5, 1 / 6, -1 / 7, 1 / 8, -1 / 9, 1 / 10)


def tau(lam: float) -> float:
    """lam - 1 - log(lam), evaluated without cancellation near lam = 1."""
    u = lam - 1.0
    if abs(u) <= 0.01:
        acc = _TAU_SERIES[-1]
        for c in reversed(_TAU_SERIES[:-1]):
            acc = c + u * acc
        return u * u * acc
    return u - math.log1p(u)


def _tau_vec(lam):
    u = lam - 1.0
    direct = u - np.log1p(np.where(u > -1.0, u, 0.0))
    acc = np.full_like(u, _TAU_SERIES[-1])
    for c in reversed(_TAU_SERIES[:-1]):
        acc = c + u * acc
    series = u * u * acc
    return np.where(np.abs(u) <= 0.01, series, direct)


def _stirling_corr(a):
    """lgamma(a) minus its leading Stirling part; a >= 12 (scalar or array)."""
    inv2 = 1.0 / (a * a) if np.isscalar(a) else 1.0 / (a * a)
    acc = _STIRLING[-1]
    for c in reversed(_STIRLING[:-1]):
        acc = c + inv2 * acc
    return acc / a


def _lgamma_vec(x):
    """lgamma over a positive float array: Stirling for x >= 12, libm below."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    big = x >= 12.0
    xb = x[big]
    out[big] = (xb - 0.5) * np.log(xb) - xb + 0.5 * _LOG_2PI + _stirling_corr(xb)
    small = ~big
    if small.any():
        out[small] = [math.lgamma(v) for v in x[small]]
    return out


def _log_prefactor(a: float, z: float) -> float:
    """log( z^a e^-z / Gamma(a) ), stable for large a via the tau form."""
    if a >= 12.0:
        return 0.5 * math.log(a / (2.0 * math.pi)) - a * tau(z / a) - _stirling_corr(a)
    return a * math.log(z) - z - math.lgamma(a)


def _log_prefactor_vec(a: float, z):
    if a >= 12.0:
        return 0.5 * math.log(a / (2.0 * math.pi)) - a * _tau_vec(z / a) - _stirling_corr(a)
    return a * np.log(z) - z - math.lgamma(a)


_SERIES_MAX_ITER = 2_000_000
_CF_MAX_ITER = 100_000


def _gammainc_series_log(a: float, z: float) -> float:
    """log P(a, z) by the lower series; requires z < a + 1."""
    ap = a
    s = 1.0 / a
    term = s
    for _ in range(_SERIES_MAX_ITER):
        ap += 1.0
        term *= z / ap
        s += term
        if term < s * 1e-17:
            return _log_prefactor(a, z) + math.log(s)
    raise ConvergenceError(f"gammainc series stalled at a={a}, z={z}")


def _gammainc_cf_logq(a: float, z: float) -> float:
    """log Q(a, z) by the upper continued fraction; requires z >= a + 1."""
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return _log_prefactor(a, z) + math.log(h)
    raise ConvergenceError(f"gammainc continued fraction stalled at a={a}, z={z}")


def gammainc_p(a: float, z: float) -> float:
    """Regularized lower incomplete gamma P(a, z)."""
    if a <= 0.0 or not math.isfinite(a):
        raise DomainError(f"gammainc_p requires a > 0, got {a}")
    if z < 0.0 or not math.isfinite(z):
        raise DomainError(f"gammainc_p requires z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    if z < a + 1.0:
        return math.exp(_gammainc_series_log(a, z))
    return -math.expm1(_gammainc_cf_logq(a, z))


def gammainc_p_log(a: float, z: float) -> float:
    """log P(a, z); usable where P itself underflows."""
    if a <= 0.0 or not math.isfinite(a):
        raise DomainError(f"gammainc_p_log requires a > 0, got {a}")
    if z < 0.0 or not math.isfinite(z):
        raise DomainError(f"gammainc_p_log requires z >= 0, got {z}")
    if z == 0.0:
        return -math.inf
    if z < a + 1.0:
        return _gammainc_series_log(a, z)
    return math.log1p(-math.exp(_gammainc_cf_logq(a, z)))


def gammainc_p_many(a: float, z):
    """P(a, z_i) over an array of thresholds, shared shape parameter."""
    if a <= 0.0:
        raise DomainError(f"gammainc_p_many requires a > 0, got {a}")
    z = np.asarray(z, dtype=np.float64)
    if z.size and float(z.min()) < 0.0:
        raise DomainError("gammainc_p_many requires z >= 0")
    out = np.zeros(z.shape, dtype=np.float64)
    pos = z > 0.0
    ser = pos & (z < a + 1.0)
    big = pos & ~ser

    if ser.any():
        zs = z[ser]
        logpref = _log_prefactor_vec(a, zs)
        s = np.full(zs.shape, 1.0 / a)
        term = s.copy()
        ap = a
        for it in range(_SERIES_MAX_ITER):
            ap += 1.0
            term *= zs / ap
            s += term
            if it % 16 == 15 and float((term - s * 1e-17).max()) <= 0.0:
                break
        else:
            raise ConvergenceError("gammainc_p_many series stalled")
        out[ser] = np.exp(logpref + np.log(s))

    if big.any():
        out[big] = [gammainc_p(a, float(v)) for v in z[big]]
    return out


def betainc_reg(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b) via the Lentz continued fraction."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"betainc_reg requires a, b > 0, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise DomainError(f"betainc_reg requires 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_bt = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_bt + math.log(_beta_cf(a, b, x)) - math.log(a))
    return -math.expm1(log_bt + math.log(_beta_cf(b, a, 1.0 - x)) - math.log(b))


def _log_beta(a: float, b: float) -> float:
    if min(a, b) >= 12.0:
        s = a + b
        return (
            0.5 * (_LOG_2PI - math.log(s))
            + (a - 0.5) * math.log(a / s)
            + (b - 0.5) * math.log(b / s)
            + _stirling_corr(a)
            + _stirling_corr(b)
            - _stirling_corr(s)
        )
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(a: float, b: float, x: float) -> float:
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 3e-16:
            return h
    raise ConvergenceError(f"betainc continued fraction stalled at a={a}, b={b}, x={x}")


# complement-path factors stay above this CDF value; anything smaller is
# evaluated directly per factor, in log domain
_SMALL_FACTOR = 1e-4
_BINOM_MAX_K = 512


def _log_small_factors(i_arr, k, t, q, log_t, log_q):
    """log I_t(i, k) for an index array where I <= ~1e-4.

    Exact k-term binomial tail: I_t(i,k) = sum_{m=0}^{k-1} C(N,m) q^m t^(N-m)
    with N = i+k-1; all-positive, summed around its peak term.
    """
    i_arr = np.asarray(i_arr, dtype=np.float64)
    N = i_arr + (k - 1.0)
    m_star = np.clip(((N * q - t) / (q + t)).astype(np.int64) + 1, 0, k - 1)
    m_star = m_star.astype(np.float64)
    peak = (_lgamma_vec(N + 1.0) - _lgamma_vec(m_star + 1.0)
            - _lgamma_vec(N - m_star + 1.0) + m_star * log_q
            + (N - m_star) * log_t)
    s = np.zeros_like(N)
    lch = np.zeros_like(N)
    for m in range(k):
        s += np.exp(lch + m * log_q + (N - m) * log_t - peak)
        lch += np.log((N - m) / (m + 1.0))
    return peak + np.log(s)


def _log_factor_large_k(i: float, k: float, t: float, log_t: float,
                        log_q: float) -> float:
    """log I_t(i, k) for one small factor when k is too large for the
    binomial sum; continued fraction evaluated in log domain."""
    if t < (i + 1.0) / (i + k + 2.0):
        log_bt = i * log_t + k * log_q - _log_beta(i, k)
        return log_bt + math.log(_beta_cf(i, k, t)) - math.log(i)
    return math.log(max(betainc_reg(t, i, k), 5e-324))


def beta_factor_logcdf(r: float, p: int, k: int) -> float:
    """sum_{i=1..p} log I_{r^2}(i, k): log-CDF of the max-of-Betas law.

    The bulk runs on the complement recurrence Q_{i+1} = Q_i + T_i with
    T_i = t^i (1-t)^k Gamma(i+k) / (Gamma(i+1) Gamma(k)): the complements
    accumulate as a positive sum (no cancellation) and each factor
    contributes log1p(-Q_i).  Once the complement saturates (factor CDF
    below _SMALL_FACTOR) the remaining factors switch to direct per-factor
    log evaluation so the deep left tail keeps its log magnitude.
    """
    if p < 1 or k < 1:
        raise DomainError(f"beta_factor_logcdf requires p, k >= 1, got p={p}, k={k}")
    if r <= 0.0:
        return -math.inf
    if r >= 1.0:
        return 0.0
    t = r * r
    q = (1.0 - r) * (1.0 + r)
    log_t = math.log(t)
    log_q = math.log(q)
    Q = np.empty(p, dtype=np.float64)
    Q[0] = math.exp(k * log_q)
    if p > 1:
        i = np.arange(1.0, p)
        log_T = _lgamma_vec(i + k) - _lgamma_vec(i + 1.0) - math.lgamma(k) \
            + i * log_t + k * log_q
        Q[1:] = Q[0] + np.cumsum(np.exp(log_T))
    switch = int(np.searchsorted(Q, 1.0 - _SMALL_FACTOR, side="left"))
    acc = float(np.sum(np.log1p(-Q[:switch]))) if switch else 0.0
    if switch >= p:
        return acc
    small = np.arange(switch + 1, p + 1, dtype=np.float64)
    if k <= _BINOM_MAX_K:
        for lo in range(0, small.size, 65536):
            chunk = small[lo:lo + 65536]
            acc += float(np.sum(_log_small_factors(chunk, k, t, q, log_t, log_q)))
    else:
        for i_val in small:
            acc += _log_factor_large_k(float(i_val), float(k), t, log_t, log_q)
    return acc
