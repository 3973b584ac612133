# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: scalar loops mirroring ``pure.py`` algorithm for
algorithm.  The Beta-product log-CDF and the vectorised incomplete gamma
are the two hot paths; everything else rides along for parity."""

from libc.math cimport (INFINITY, NAN, exp, expm1, fabs, isfinite, lgamma,
                        log, log1p, sqrt)

import numpy as np

from ..errors import ConvergenceError, DomainError

NAME = "compiled"

cdef double LOG_2PI = 1.8378770664093454835606594728112353
cdef double PI = 3.141592653589793238462643383279503

cdef double[7] STIRLING
STIRLING[0] = 1.0 / 12.0
STIRLING[1] = -1.0 / 360.0
STIRLING[2] = 1.0 / 1260.0
STIRLING[3] = -1.0 / 1680.0
STIRLING[4] = 1.0 / 1188.0
STIRLING[5] = -691.0 / 360360.0
STIRLING[6] = 1.0 / 156.0

cdef double[9] TAU_SERIES
TAU_SERIES[0] = 1.0 / 2.0
TAU_SERIES[1] = -1.0 / 3.0
TAU_SERIES[2] = 1.0 / 4.0
TAU_SERIES[3] = -1.0 / 5.0
TAU_SERIES[4] = 1.0 / 6.0
TAU_SERIES[5] = -1.0 / 7.0
TAU_SERIES[6] = 1.0 / 8.0
TAU_SERIES[7] = -1.0 / 9.0
TAU_SERIES[8] = 1.0 / 10.0


cdef inline double _tau(double lam) nogil:
    cdef double u = lam - 1.0
    cdef double acc
    cdef int j
    if fabs(u) <= 0.01:
        acc = TAU_SERIES[8]
        for j in range(7, -1, -1):
            acc = TAU_SERIES[j] + u * acc
        return u * u * acc
    return u - log1p(u)


cdef inline double _stirling_corr(double a) nogil:
    cdef double inv2 = 1.0 / (a * a)
    cdef double acc = STIRLING[6]
    cdef int j
    for j in range(5, -1, -1):
        acc = STIRLING[j] + inv2 * acc
    return acc / a


cdef inline double _log_prefactor(double a, double z) nogil:
    if a >= 12.0:
        return 0.5 * log(a / (2.0 * PI)) - a * _tau(z / a) - _stirling_corr(a)
    return a * log(z) - z - lgamma(a)


cdef double _series_log(double a, double z) nogil:
    # log P(a, z) by the lower series; z < a + 1
    cdef double ap = a
    cdef double s = 1.0 / a
    cdef double term = s
    cdef long it
    for it in range(2000000):
        ap += 1.0
        term *= z / ap
        s += term
        if term < s * 1e-17:
            return _log_prefactor(a, z) + log(s)
    return NAN


cdef double _cf_logq(double a, double z) nogil:
    # log Q(a, z) by the upper continued fraction; z >= a + 1
    cdef double tiny = 1e-300
    cdef double b = z + 1.0 - a
    cdef double c = 1.0 / tiny
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef long i
    for i in range(1, 100000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < tiny:
            d = tiny
        c = b + an / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < 1e-16:
            return _log_prefactor(a, z) + log(h)
    return NAN


cdef inline void _check_gammainc_args(double a, double z):
    if a <= 0.0 or not isfinite(a):
        raise DomainError(f"gammainc_p requires a > 0, got {a}")
    if z < 0.0 or not isfinite(z):
        raise DomainError(f"gammainc_p requires z >= 0, got {z}")


def tau(double lam):
    """lam - 1 - log(lam), cancellation-safe near lam = 1."""
    return _tau(lam)


def gammainc_p(double a, double z):
    """Regularized lower incomplete gamma P(a, z)."""
    _check_gammainc_args(a, z)
    if z == 0.0:
        return 0.0
    cdef double r
    if z < a + 1.0:
        r = _series_log(a, z)
        if r != r:
            raise ConvergenceError(f"gammainc series stalled at a={a}, z={z}")
        return exp(r)
    r = _cf_logq(a, z)
    if r != r:
        raise ConvergenceError(f"gammainc continued fraction stalled at a={a}, z={z}")
    return -expm1(r)


def gammainc_p_log(double a, double z):
    """log P(a, z); usable where P itself underflows."""
    _check_gammainc_args(a, z)
    if z == 0.0:
        return -INFINITY
    cdef double r
    if z < a + 1.0:
        r = _series_log(a, z)
        if r != r:
            raise ConvergenceError(f"gammainc series stalled at a={a}, z={z}")
        return r
    r = _cf_logq(a, z)
    if r != r:
        raise ConvergenceError(f"gammainc continued fraction stalled at a={a}, z={z}")
    return log1p(-exp(r))


def gammainc_p_many(double a, z):
    """P(a, z_i) over an array of thresholds, shared shape parameter."""
    if a <= 0.0:
        raise DomainError(f"gammainc_p_many requires a > 0, got {a}")
    zarr = np.ascontiguousarray(z, dtype=np.float64)
    out = np.empty(zarr.shape, dtype=np.float64)
    cdef double[::1] zv = zarr.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t i, m = zv.shape[0]
    cdef double zi, r
    cdef bint bad = False
    with nogil:
        for i in range(m):
            zi = zv[i]
            if zi < 0.0 or not isfinite(zi):
                bad = True
                break
            if zi == 0.0:
                ov[i] = 0.0
            elif zi < a + 1.0:
                r = _series_log(a, zi)
                if r != r:
                    bad = True
                    break
                ov[i] = exp(r)
            else:
                r = _cf_logq(a, zi)
                if r != r:
                    bad = True
                    break
                ov[i] = -expm1(r)
    if bad:
        raise DomainError("gammainc_p_many requires finite z >= 0 (or evaluation stalled)")
    return out


cdef inline double _log_beta(double a, double b) nogil:
    cdef double s = a + b
    if a >= 12.0 and b >= 12.0:
        return (0.5 * (LOG_2PI - log(s))
                + (a - 0.5) * log(a / s)
                + (b - 0.5) * log(b / s)
                + _stirling_corr(a) + _stirling_corr(b) - _stirling_corr(s))
    return lgamma(a) + lgamma(b) - lgamma(s)


cdef double _beta_cf(double a, double b, double x) nogil:
    cdef double tiny = 1e-300
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef long m, m2
    if fabs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 100000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if fabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < 3e-16:
            return h
    return NAN


def betainc_reg(double x, double a, double b):
    """Regularized incomplete beta I_x(a, b) via the Lentz continued fraction."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"betainc_reg requires a, b > 0, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise DomainError(f"betainc_reg requires 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    cdef double log_bt = a * log(x) + b * log1p(-x) - _log_beta(a, b)
    cdef double cf
    if x < (a + 1.0) / (a + b + 2.0):
        cf = _beta_cf(a, b, x)
        if cf != cf:
            raise ConvergenceError(f"betainc stalled at a={a}, b={b}, x={x}")
        return exp(log_bt + log(cf) - log(a))
    cf = _beta_cf(b, a, 1.0 - x)
    if cf != cf:
        raise ConvergenceError(f"betainc stalled at a={a}, b={b}, x={x}")
    return -expm1(log_bt + log(cf) - log(b))


cdef double SMALL_FACTOR = 1e-4
cdef double BINOM_MAX_K = 512.0


cdef double _log_small_factor(double i, double k, double t, double q,
                              double log_t, double log_q) nogil:
    # log I_t(i, k) for one factor with I <= ~1e-4: exact k-term binomial
    # tail sum around its peak term (k small), else log-domain fraction
    cdef double N = i + k - 1.0
    cdef double peak, s, lch, x_switch, log_bt, cf
    cdef long m, m_star, kk
    if k <= BINOM_MAX_K:
        kk = <long> k
        m_star = <long> ((N * q - t) / (q + t)) + 1
        if m_star < 0:
            m_star = 0
        if m_star > kk - 1:
            m_star = kk - 1
        peak = (lgamma(N + 1.0) - lgamma(m_star + 1.0) - lgamma(N - m_star + 1.0)
                + m_star * log_q + (N - m_star) * log_t)
        s = 0.0
        lch = 0.0
        for m in range(kk):
            s += exp(lch + m * log_q + (N - m) * log_t - peak)
            lch += log((N - m) / (m + 1.0))
        return peak + log(s)
    x_switch = (i + 1.0) / (i + k + 2.0)
    if t < x_switch:
        log_bt = i * log_t + k * log_q - _log_beta(i, k)
        cf = _beta_cf(i, k, t)
        if cf != cf:
            return NAN
        return log_bt + log(cf) - log(i)
    cf = _beta_cf(k, i, q)
    if cf != cf:
        return NAN
    s = -expm1(i * log_t + k * log_q - _log_beta(i, k) + log(cf) - log(k))
    if s < 5e-324:
        s = 5e-324
    return log(s)


def beta_factor_logcdf(double r, long p, long k):
    """sum_{i=1..p} log I_{r^2}(i, k) by the complement recurrence.

    Same algorithm as the pure backend: Q_{i+1} = Q_i + T_i with the log of
    T_i advanced incrementally (refreshed from lgamma every 4096 steps to
    cap drift); complements accumulate as a positive sum, and factors whose
    complement saturates (CDF below SMALL_FACTOR) switch to direct
    per-factor log evaluation.
    """
    if p < 1 or k < 1:
        raise DomainError(f"beta_factor_logcdf requires p, k >= 1, got p={p}, k={k}")
    if r <= 0.0:
        return -INFINITY
    if r >= 1.0:
        return 0.0
    cdef double t = r * r
    cdef double q = (1.0 - r) * (1.0 + r)
    cdef double log_t = log(t)
    cdef double log_q = log(q)
    cdef double lgk = lgamma(k)
    cdef double acc = 0.0
    cdef double Q = exp(k * log_q)
    cdef double logT, piece
    cdef long i, first_small = 0
    cdef bint stalled = False
    with nogil:
        if Q <= 1.0 - SMALL_FACTOR:
            acc = log1p(-Q)
            first_small = p + 1
            logT = lgamma(1.0 + k) - lgamma(2.0) - lgk + log_t + k * log_q
            for i in range(1, p):
                Q += exp(logT)
                if Q > 1.0 - SMALL_FACTOR:
                    first_small = i + 1
                    break
                acc += log1p(-Q)
                if (i & 4095) == 0:
                    logT = (lgamma(<double> (i + 1) + k) - lgamma(<double> (i + 2))
                            - lgk + (i + 1) * log_t + k * log_q)
                else:
                    logT += log_t + log((<double> (i + k)) / (<double> (i + 1)))
        else:
            first_small = 1
        if first_small <= p:
            for i in range(first_small, p + 1):
                piece = _log_small_factor(<double> i, <double> k, t, q, log_t, log_q)
                if piece != piece:
                    stalled = True
                    break
                acc += piece
    if stalled:
        raise ConvergenceError(
            f"beta factor evaluation stalled at r={r}, p={p}, k={k}")
    return acc
