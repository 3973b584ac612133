"""Scalar special functions.

Log-gamma, erfc, the regularized incomplete gamma/beta functions, and the
rate-function machinery (``tau``, ``eta``, ``phi``) behind the uniform
large-shape approximation of the gamma CDF.

``tau``/``eta`` follow the standard notation of uniform incomplete-gamma
asymptotics (Temme; DLMF 8.12).  Everything here is pure and reentrant.
"""

import math
from dataclasses import dataclass

from . import _backend
from .errors import DomainError

__all__ = [
    "ApproxValue",
    "tau",
    "eta",
    "phi",
    "log_phi",
    "ln_gamma",
    "erfc",
    "gammainc_p",
    "gammainc_p_log",
    "gammainc_p_uniform",
    "gammainc_p_uniform_log",
    "betainc",
]

# Slack constant folded into the uniform-approximation error bound to cover
# the O(1/k) remainder whose universal constant is not quantified; validated
# empirically against the exact evaluation (heuristic, not certified).
UNIFORM_BOUND_SLACK = 2.0


@dataclass(frozen=True)
class ApproxValue:
    """A computed value together with a guaranteed relative error bound."""

    value: float
    rel_error_bound: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError("ApproxValue.value must be finite")
        if not (math.isfinite(self.rel_error_bound) and self.rel_error_bound >= 0.0):
            raise DomainError("ApproxValue.rel_error_bound must be finite and >= 0")


def tau(lam: float) -> float:
    """lam - 1 - log(lam) for lam > 0: the gamma large-deviation rate.

    Nonnegative, with its unique zero at lam = 1; evaluated by a short
    series near 1 to avoid cancellation.
    """
    if lam <= 0.0 or not math.isfinite(lam):
        raise DomainError(f"tau requires lam > 0, got {lam}")
    return _backend.tau(lam)


def eta(lam: float) -> float:
    """-sqrt(2 * tau(lam)) for lam in (0, 1): the standardized deviation."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"eta requires 0 < lam < 1, got {lam}")
    return -math.sqrt(2.0 * _backend.tau(lam))


def log_phi(a: float, lam: float) -> float:
    """log of exp(-a*tau(lam)) / sqrt(2*pi*a)."""
    if a <= 0.0 or lam <= 0.0:
        raise DomainError(f"log_phi requires a > 0 and lam > 0, got a={a}, lam={lam}")
    return -a * _backend.tau(lam) - 0.5 * math.log(2.0 * math.pi * a)


def phi(a: float, lam: float) -> float:
    """exp(-a*tau(lam)) / sqrt(2*pi*a), evaluated through the log domain."""
    return math.exp(log_phi(a, lam))


def ln_gamma(a: float) -> float:
    """log Gamma(a) for a > 0."""
    if a <= 0.0 or not math.isfinite(a):
        raise DomainError(f"ln_gamma requires a > 0, got {a}")
    return math.lgamma(a)


def erfc(x: float) -> float:
    """Complementary error function 2/sqrt(pi) * int_x^inf exp(-t^2) dt."""
    return math.erfc(x)


def gammainc_p(a: float, z: float) -> float:
    """Regularized lower incomplete gamma P(a, z) = Gamma(a) CDF at z.

    Lower series for z < a + 1, upper continued fraction otherwise, with the
    prefactor kept in log domain throughout.
    """
    return _backend.gammainc_p(a, z)


def gammainc_p_log(a: float, z: float) -> float:
    """log P(a, z); finite where P itself underflows double precision."""
    return _backend.gammainc_p_log(a, z)


def gammainc_p_uniform_log(k: float, lam: float) -> float:
    """log of the uniform large-shape approximation of P(k, k*lam)."""
    if k <= 0.0:
        raise DomainError(f"gammainc_p_uniform_log requires k > 0, got {k}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"gammainc_p_uniform_log requires 0 < lam < 1, got {lam}")
    return log_phi(k, lam) - math.log1p(-lam)


def gammainc_p_uniform(k: float, lam: float) -> ApproxValue:
    """Uniform large-shape approximation of P(k, k*lam) with an error bound.

    Value: phi(k, lam) / (1 - lam).  The bound combines the tail-integral
    remainder h(x) < 1/(2 x^2) at x = sqrt(k*tau(lam)) with a heuristic
    O(1/k) slack (``UNIFORM_BOUND_SLACK``); it blows up as lam -> 1 with
    sqrt(k)(1 - lam) small, which is the caller's signal to distrust the
    value.  The returned value is 0.0 when the true magnitude underflows;
    use ``gammainc_p_uniform_log`` for tail-safe comparisons.
    """
    log_value = gammainc_p_uniform_log(k, lam)
    t = _backend.tau(lam)
    bound = (1.0 - lam) / math.sqrt(2.0 * t) / (2.0 * k * t) + UNIFORM_BOUND_SLACK / k
    return ApproxValue(value=math.exp(log_value), rel_error_bound=bound)


def betainc(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b) = Beta(a, b) CDF at x.

    Continued-fraction evaluation with the log-domain prefactor, switched
    through the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) so the fraction always
    runs on its convergent side.
    """
    return _backend.betainc_reg(x, a, b)
