"""Regime classification and normalizing constants.

For an (n, p) truncation with depth k = n - p, picks the limiting regime
and computes the location/scale pair (A, B) that standardizes the spectral
radius, including the monotone root solve of the scaling equation for the
intermediate regime.
"""

import math
from dataclasses import dataclass
from enum import Enum

from . import special
from .errors import AmbiguousRegimeError, ConvergenceError, DomainError
from .laws import LimitLaw

RESIDUAL_TOL = 1e-12
_MAX_SOLVE_ITER = 200


@dataclass(frozen=True)
class EnsembleSpec:
    """Matrix dimension n and truncated block size p (depth k = n - p)."""

    n: int
    p: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"need n >= 2, got n={self.n}")
        if not 1 <= self.p < self.n:
            raise DomainError(f"need 1 <= p < n, got p={self.p}, n={self.n}")

    @classmethod
    def from_depth(cls, n: int, k: int) -> "EnsembleSpec":
        return cls(n=n, p=n - k)

    @property
    def k(self) -> int:
        return self.n - self.p


class RegimeLabel(str, Enum):
    THM1_COMBINED = "thm1"
    THM2_SUBLOG = "thm2"
    THM3_FIXED_K = "thm3"
    THM4_INTERMEDIATE = "thm4"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class LambdaSolution:
    """Root of the scaling equation with its residual certificate."""

    lam: float
    residual: float
    iterations: int

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda root must lie in (0,1), got {self.lam}")
        if abs(self.residual) > RESIDUAL_TOL:
            raise DomainError(f"lambda root residual {self.residual} exceeds {RESIDUAL_TOL}")


@dataclass(frozen=True)
class Normalization:
    """Location A, scale B and target law for a given regime."""

    A: float
    B: float
    law: LimitLaw
    regime: RegimeLabel
    root: LambdaSolution | None = None
    gamma_quantile: float | None = None  # sub-log regime: a with P(k, a) = k/n

    def __post_init__(self):
        if not 0.0 < self.A <= 1.0:
            raise DomainError(f"need 0 < A <= 1, got {self.A}")
        if not self.B > 0.0:
            raise DomainError(f"need B > 0, got {self.B}")


def scaling_equation(spec: EnsembleSpec, lam: float) -> float:
    """tau(lam) + (2/k) log(1 - lam): strictly decreasing on (0, 1)."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"scaling_equation requires 0 < lam < 1, got {lam}")
    return special.tau(lam) + (2.0 / spec.k) * math.log1p(-lam)


def scaling_target(spec: EnsembleSpec) -> float:
    """(1/k) log( n / sqrt(2 pi k^3) ): right-hand side of the root solve."""
    k = spec.k
    return (math.log(spec.n) - 0.5 * math.log(2.0 * math.pi) - 1.5 * math.log(k)) / k


def _scaling_slope(spec: EnsembleSpec, lam: float) -> float:
    return 1.0 - 1.0 / lam - (2.0 / spec.k) / (1.0 - lam)


def solve_lambda(spec: EnsembleSpec) -> LambdaSolution:
    """Root of scaling_equation(spec, .) = scaling_target(spec) in (0, 1).

    Bracketing bisection with Newton acceleration; the equation decreases
    from +inf to -inf, so a unique root exists for any right-hand side.
    The residual (not the root coordinate) is driven below RESIDUAL_TOL
    because the scale constant is residual-sensitive through 1/(1-lam).
    """
    target = scaling_target(spec)
    lo, hi = 1e-15, 1.0 - 1e-15
    lam = 0.5
    best = (math.inf, lam)
    for it in range(1, _MAX_SOLVE_ITER + 1):
        f = scaling_equation(spec, lam) - target
        if abs(f) < best[0]:
            best = (abs(f), lam)
        if abs(f) <= RESIDUAL_TOL:
            return LambdaSolution(lam=lam, residual=f, iterations=it)
        if f > 0.0:  # equation decreasing: root is to the right
            lo = lam
        else:
            hi = lam
        step = lam - f / _scaling_slope(spec, lam)
        lam = step if lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(
        f"lambda solve did not reach residual {RESIDUAL_TOL} for n={spec.n}, "
        f"k={spec.k}; best |residual| {best[0]:.3e}"
    )


def shifted_lambda(spec: EnsembleSpec, lam: float, x: float) -> float:
    """lam * (1 + x / (k (1 - lam))): the x-shifted root coordinate."""
    out = lam * (1.0 + x / (spec.k * (1.0 - lam)))
    if not 0.0 < out < 1.0:
        raise DomainError(
            f"shifted lambda {out} left (0,1); x={x} too extreme for n={spec.n}, k={spec.k}"
        )
    return out


def order_scaled_lambda(spec: EnsembleSpec, lam_x: float, j: int) -> float:
    """((n + 1 - j) / n) * lam_x for 1 <= j <= n - 1; nonincreasing in j."""
    if not 1 <= j <= spec.n - 1:
        raise DomainError(f"need 1 <= j <= n-1, got j={j}, n={spec.n}")
    return (spec.n + 1 - j) / spec.n * lam_x


def intermediate_constants(spec: EnsembleSpec) -> Normalization:
    """Gumbel constants for the intermediate-depth regime (label thm4)."""
    root = solve_lambda(spec)
    lam = root.lam
    A = math.sqrt(1.0 - spec.k * lam / spec.n)
    B = lam / (2.0 * A * spec.n * (1.0 - lam))
    return Normalization(A=A, B=B, law=LimitLaw.gumbel(),
                         regime=RegimeLabel.THM4_INTERMEDIATE, root=root)


def combined_location_scale(y: float) -> tuple[float, float]:
    """The (location, scale) pair (a(y), b(y)) of the combined regime.

    a(y) = sqrt(log y) - log(sqrt(2 pi) log y) / sqrt(log y) and
    b(y) = 1 / sqrt(log y), for y > 1.
    """
    if y <= 1.0:
        raise DomainError(f"combined-regime location/scale need y > 1, got {y}")
    log_y = math.log(y)
    a_y = math.sqrt(log_y) - math.log(math.sqrt(2.0 * math.pi) * log_y) / math.sqrt(log_y)
    return a_y, 1.0 / math.sqrt(log_y)


def combined_constants(spec: EnsembleSpec) -> Normalization:
    """Gumbel constants for the combined heavy/moderate regime (label thm1).

    Hard-errors at y = n c^2 / (1 - c^2) <= 3, below which the constants
    are not credible (no extrapolation).
    """
    n, p = spec.n, spec.p
    c_sq = (p - 1) / (n - 1)
    if not 0.0 < c_sq < 1.0:
        raise DomainError(f"combined regime needs 2 <= p < n, got p={p}")
    y = n * c_sq / (1.0 - c_sq)
    if y <= 3.0:
        raise DomainError(f"combined-regime constants undefined for y = {y} <= 3")
    a_y, b_y = combined_location_scale(y)
    c = math.sqrt(c_sq)
    half_width = 0.5 * math.sqrt(1.0 - c_sq) / math.sqrt(n - 1)
    A = c + half_width * a_y
    B = half_width * b_y
    return Normalization(A=A, B=B, law=LimitLaw.gumbel(), regime=RegimeLabel.THM1_COMBINED)


def sublog_constants(spec: EnsembleSpec) -> Normalization:
    """Gumbel constants for the sub-logarithmic depth regime (label thm2).

    Solves P(k, a) = k/n for a by bracketing bisection with Newton steps
    (P(k, .) is strictly increasing), then A = sqrt(1 - a/n), B = a/(2nk).
    """
    n, k = spec.n, spec.k
    target = k / n
    a = _solve_gamma_quantile(k, target)
    A = math.sqrt(1.0 - a / n)
    B = a / (2.0 * n * k)
    return Normalization(A=A, B=B, law=LimitLaw.gumbel(),
                         regime=RegimeLabel.THM2_SUBLOG, gamma_quantile=a)


def _solve_gamma_quantile(k: int, target: float) -> float:
    lo, hi = 0.0, float(k)
    for _ in range(200):
        if special.gammainc_p(k, hi) >= target:
            break
        hi *= 2.0
    else:
        raise ConvergenceError(f"could not bracket P({k}, a) = {target}")
    a = 0.5 * (lo + hi)
    for it in range(_MAX_SOLVE_ITER):
        f = special.gammainc_p(k, a) - target
        if abs(f) <= RESIDUAL_TOL:
            return a
        if f < 0.0:
            lo = a
        else:
            hi = a
        slope = math.exp((k - 1.0) * math.log(a) - a - special.ln_gamma(k)) if a > 0 else 0.0
        step = a - f / slope if slope > 0.0 else math.inf
        a = step if lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(f"gamma quantile solve stalled for k={k}, target={target}")


def fixed_k_constants(spec: EnsembleSpec) -> Normalization:
    """Reversed-Weibull constants for fixed truncation depth (label thm3)."""
    n, k = spec.n, spec.k
    # ((k+1)!)^(1/k) / (2 n^(1+1/k)), factorial through ln_gamma
    log_B = special.ln_gamma(k + 2.0) / k - (1.0 + 1.0 / k) * math.log(n) - math.log(2.0)
    return Normalization(A=1.0, B=math.exp(log_B), law=LimitLaw.reversed_weibull(k),
                         regime=RegimeLabel.THM3_FIXED_K)


_CONSTANTS = {
    RegimeLabel.THM1_COMBINED: combined_constants,
    RegimeLabel.THM2_SUBLOG: sublog_constants,
    RegimeLabel.THM3_FIXED_K: fixed_k_constants,
    RegimeLabel.THM4_INTERMEDIATE: intermediate_constants,
}

FIXED_K_CAP = 8


def regime_candidates(spec: EnsembleSpec) -> list[RegimeLabel]:
    """All regimes whose finite-sample predicate matches (n, k)."""
    n, p, k = spec.n, spec.p, spec.k
    log_n = math.log(n)
    out = []
    if k >= 2.0 * log_n ** 3 and p >= 16:
        out.append(RegimeLabel.THM1_COMBINED)
    if k <= 0.5 * log_n:
        out.append(RegimeLabel.THM2_SUBLOG)
    if k <= FIXED_K_CAP:
        out.append(RegimeLabel.THM3_FIXED_K)
    if 2.0 * log_n <= k and k * log_n ** 3 <= n:
        out.append(RegimeLabel.THM4_INTERMEDIATE)
    return out


def classify_regime(spec: EnsembleSpec) -> RegimeLabel:
    """Deterministic finite-sample regime label for (n, p).

    The asymptotic conditions overlap and are undecidable from a single
    (n, p); the predicates here are deliberately conservative and return
    AMBIGUOUS near boundaries rather than guessing.  The only sanctioned
    overlap is combined/intermediate, where both normalizations are valid
    and the intermediate one is preferred.
    """
    matches = regime_candidates(spec)
    if len(matches) == 1:
        return matches[0]
    if set(matches) == {RegimeLabel.THM1_COMBINED, RegimeLabel.THM4_INTERMEDIATE}:
        return RegimeLabel.THM4_INTERMEDIATE
    return RegimeLabel.AMBIGUOUS


def constants_for(spec: EnsembleSpec, regime: RegimeLabel | None = None) -> Normalization:
    """Normalization for a forced regime, or for the auto-classified one.

    Auto-classification that lands on AMBIGUOUS raises
    AmbiguousRegimeError listing the candidate regimes.
    """
    if regime is None or regime is RegimeLabel.AMBIGUOUS:
        regime = classify_regime(spec)
        if regime is RegimeLabel.AMBIGUOUS:
            raise AmbiguousRegimeError(regime_candidates(spec))
    return _CONSTANTS[regime](spec)
