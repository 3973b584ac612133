"""Numeric and Monte Carlo convergence diagnostics.

Checks the intermediate-regime estimates behind the Gumbel limit (root-gap
growth, leading-term rate, tail sums, ratio concentration, the minimum
law) and builds goodness-of-fit tables for exact or sampled finite-n laws
against their limits.  Check ids 5..12 match the CLI's ``--which`` values.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend, special
from ._threads import indexed_map
from .errors import DomainError
from .exact import standardized_cdf
from .laws import LimitLaw, law_cdf
from .normalization import (EnsembleSpec, Normalization, RegimeLabel,
                            constants_for, shifted_lambda, solve_lambda)
from .sampling import (METHOD_BETA, METHOD_GAMMA_RATIO, min_perturbation_gap,
                       oracle_radius, sample_beta_max, sample_gamma_ratio)

DEFAULT_GRID = (-3.0, 6.0, 0.1)

_DIAG_TAG = 0x44494147  # "DIAG"


@dataclass(frozen=True)
class GofReport:
    """Goodness-of-fit distances between a finite-n law and a limit law."""

    ks_statistic: float
    sup_grid_distance: float
    sample_count: int
    grid: tuple
    law: LimitLaw
    spec: EnsembleSpec

    def __post_init__(self):
        if not 0.0 <= self.ks_statistic <= 1.0:
            raise DomainError(f"ks_statistic must lie in [0,1], got {self.ks_statistic}")
        if not 0.0 <= self.sup_grid_distance <= 1.0:
            raise DomainError(
                f"sup_grid_distance must lie in [0,1], got {self.sup_grid_distance}")


@dataclass(frozen=True)
class CheckResult:
    """One numeric/Monte Carlo check: observed vs target at a tolerance."""

    check_id: int
    observed: float
    target: float
    tolerance: float
    passed: bool
    inputs: dict = field(default_factory=dict)


def make_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0.0:
        raise DomainError(f"grid step must be > 0, got {step}")
    count = int(math.floor((hi - lo) / step + 1.0 + 1e-9))
    if count < 1:
        raise DomainError(f"empty grid {lo}:{hi}:{step}")
    return lo + step * np.arange(count)


def ks_statistic(samples, cdf) -> float:
    """sup_i max(i/N - F(s_i), F(s_i) - (i-1)/N) over the sorted sample."""
    s = np.sort(np.asarray(samples, dtype=np.float64))
    if s.size == 0:
        raise DomainError("ks_statistic requires a nonempty sample")
    f = np.asarray([cdf(v) for v in s], dtype=np.float64)
    i = np.arange(1, s.size + 1, dtype=np.float64)
    return float(max((i / s.size - f).max(), (f - (i - 1) / s.size).max()))


def _diag_stream(seed: int, check_id: int) -> np.random.Generator:
    ss = np.random.SeedSequence(
        entropy=(seed & 0xFFFFFFFFFFFFFFFF, check_id, _DIAG_TAG))
    return np.random.Generator(np.random.Philox(ss))


def tail_cut(spec: EnsembleSpec) -> int:
    """Integer part of k (log n)^3, capped at n/2 so the kept index range
    1..n-m stays nonempty at desk-scale n (the cap only binds when the
    asymptotic regime constant is not yet small; extra indices beyond the
    uncapped range almost never attain the min)."""
    raw = int(spec.k * math.log(spec.n) ** 3)
    return min(raw, spec.n // 2)


# --- check 5: root-gap growth and the explicit upper inequality ---

def check_root_gap_growth(specs) -> list[CheckResult]:
    """Per spec: sqrt(k)(1-lam) must grow along the sequence and satisfy
    k (1-lam)^2 < 2 log(n sqrt(k) / (2 pi)) exactly."""
    out = []
    prev_gap = -math.inf
    for spec in specs:
        lam = solve_lambda(spec).lam
        gap = math.sqrt(spec.k) * (1.0 - lam)
        observed = spec.k * (1.0 - lam) ** 2
        target = 2.0 * math.log(spec.n * math.sqrt(spec.k) / (2.0 * math.pi))
        out.append(CheckResult(
            check_id=5, observed=observed, target=target, tolerance=0.0,
            passed=(observed < target) and (gap > prev_gap),
            inputs={"n": spec.n, "k": spec.k, "lam": lam, "sqrt_gap": gap},
        ))
        prev_gap = gap
    return out


# --- check 6: uniform closeness of the order-scaled root gaps ---

def check_shifted_gap_uniform(spec: EnsembleSpec, x: float,
                              tolerance: float = 0.5) -> CheckResult:
    """max_{j <= j_n} |(1 - lam_{n,j}(x)) / (1 - lam_n) - 1| with the proof's
    range j_n = floor(n / sqrt(k * delta)), delta = sqrt(k)(1 - lam_n)."""
    lam = solve_lambda(spec).lam
    lam_x = shifted_lambda(spec, lam, x)
    delta = math.sqrt(spec.k) * (1.0 - lam)
    j_n = max(1, min(spec.n - 1, int(spec.n / math.sqrt(spec.k * delta))))
    j = np.arange(1, j_n + 1, dtype=np.float64)
    lam_nj = (spec.n + 1.0 - j) / spec.n * lam_x
    observed = float(np.abs((1.0 - lam_nj) / (1.0 - lam) - 1.0).max())
    return CheckResult(check_id=6, observed=observed, target=0.0,
                       tolerance=tolerance, passed=observed <= tolerance,
                       inputs={"n": spec.n, "k": spec.k, "x": x, "j_n": j_n})


# --- check 7: leading-term rate ---

def check_leading_term_rate(spec: EnsembleSpec, x: float,
                            tolerance: float = 0.1) -> CheckResult:
    """phi(k, lam(x)) / (1-lam)^2 * n / (k e^x) -> 1."""
    lam = solve_lambda(spec).lam
    lam_x = shifted_lambda(spec, lam, x)
    log_obs = (special.log_phi(spec.k, lam_x) - 2.0 * math.log1p(-lam)
               + math.log(spec.n / spec.k) - x)
    observed = math.exp(log_obs)
    return CheckResult(check_id=7, observed=observed, target=1.0,
                       tolerance=tolerance, passed=abs(observed - 1.0) <= tolerance,
                       inputs={"n": spec.n, "k": spec.k, "x": x, "lam": lam})


# --- check 8: tail sum of incomplete-gamma probabilities ---

def check_tail_sum_limit(spec: EnsembleSpec, x: float, j_count: int | None = None,
                         tolerance: float | None = None) -> CheckResult:
    """sum_{j=1..j_count} P(k, k lam_{n,j}(x)) -> e^x; the summand carries
    the k-scaled second argument (the Gamma(k) threshold)."""
    if j_count is None:
        j_count = spec.n - tail_cut(spec)
    if not 1 <= j_count <= spec.n - 1:
        raise DomainError(f"j_count must lie in [1, n-1], got {j_count}")
    target = math.exp(x)
    if tolerance is None:
        tolerance = 0.1 * target
    lam = solve_lambda(spec).lam
    lam_x = shifted_lambda(spec, lam, x)
    j = np.arange(1, j_count + 1, dtype=np.float64)
    z = spec.k * lam_x * (spec.n + 1.0 - j) / spec.n
    observed = float(_backend.gammainc_p_many(float(spec.k), z).sum())
    return CheckResult(check_id=8, observed=observed, target=target,
                       tolerance=tolerance, passed=abs(observed - target) <= tolerance,
                       inputs={"n": spec.n, "k": spec.k, "x": x, "j_count": j_count})


# --- check 10: single-draw escape probability ---

def check_single_draw_escape(spec: EnsembleSpec, x: float, samples: int,
                             seed: int, tolerance: float = 0.02) -> CheckResult:
    """Monte Carlo estimate of P(Y_1^2 > 1 - (k/n) lam_n(-x)) -> 0."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    lam = solve_lambda(spec).lam
    lam_neg = shifted_lambda(spec, lam, -x)
    threshold = 1.0 - spec.k * lam_neg / spec.n
    rng = _diag_stream(seed, 10)
    s = rng.standard_gamma(spec.k, size=samples)
    g = rng.standard_gamma(spec.p, size=samples)
    observed = float(np.mean(g / (s + g) > threshold))
    return CheckResult(check_id=10, observed=observed, target=0.0,
                       tolerance=tolerance, passed=observed <= tolerance,
                       inputs={"n": spec.n, "k": spec.k, "x": x, "samples": samples})


# --- check 11: uniform concentration of Gamma(j)/j ratios ---

def check_gamma_ratio_concentration(n: int, m: int, trials: int,
                                    seed: int) -> CheckResult:
    """max over trials of max_{m<=j<=n} |T_j/j - 1| * sqrt(m/log n) <= 4,
    with T_j built as cumulative sums of exponentials."""
    if n > 10**6:
        raise DomainError(f"concentration check capped at n <= 1e6, got {n}")
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = _diag_stream(seed, 11)
    j = np.arange(m, n + 1, dtype=np.float64)
    worst = 0.0
    for _ in range(trials):
        t = np.empty(n - m + 1)
        t[0] = rng.standard_gamma(m)
        t[1:] = rng.standard_exponential(n - m)
        np.cumsum(t, out=t)
        worst = max(worst, float(np.abs(t / j - 1.0).max()))
    observed = worst * math.sqrt(m) / math.sqrt(math.log(n))
    return CheckResult(check_id=11, observed=observed, target=0.0, tolerance=4.0,
                       passed=observed <= 4.0,
                       inputs={"n": n, "m": m, "trials": trials})


# --- check 12: the normalized minimum converges to the minimum law ---

def check_min_ratio_law(spec: EnsembleSpec, samples: int, seed: int,
                        grid=None) -> GofReport:
    """Monte Carlo law of the standardized min of Gamma(k) ratios vs the
    minimum-Gumbel limit 1 - exp(-e^x)."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    lam = solve_lambda(spec).lam
    n, k = spec.n, spec.k
    j_count = n - tail_cut(spec)
    denom = n + 1.0 - np.arange(1, j_count + 1, dtype=np.float64)
    scale = lam / (n * (1.0 - lam))
    loc = k * lam / n
    rng = _diag_stream(seed, 12)
    vals = np.empty(samples)
    for i in range(samples):
        s = rng.standard_gamma(k, size=j_count)
        vals[i] = (float((s / denom).min()) - loc) / scale
    law = LimitLaw.gumbel_min()
    ks = ks_statistic(vals, lambda v: law_cdf(law, v))
    grid = np.asarray(make_grid(*DEFAULT_GRID) if grid is None else grid, dtype=np.float64)
    ecdf = np.searchsorted(np.sort(vals), grid, side="right") / samples
    ref = np.array([law_cdf(law, float(g)) for g in grid])
    return GofReport(ks_statistic=ks, sup_grid_distance=float(np.abs(ecdf - ref).max()),
                     sample_count=samples, grid=tuple(float(g) for g in grid),
                     law=law, spec=spec)


def min_path_perturbation_bound(spec: EnsembleSpec, seed: int):
    """(observed, bound) from one coupled draw: how far the Gamma-ratio min
    path can sit from the normalized-min path used by check 12.

    The ratio path divides by the Gamma(n+1-j) totals, the min path by
    their means n+1-j; the deviation of the min obeys the relative-min
    perturbation bound.
    """
    n, k = spec.n, spec.k
    j_count = n - tail_cut(spec)
    rng = _diag_stream(seed, 9)
    idx = np.arange(1, j_count + 1, dtype=np.float64)
    s = rng.standard_gamma(k, size=j_count)
    rest = rng.standard_gamma(n + 1.0 - idx - k)
    totals = s + rest
    eps = (n + 1.0 - idx) / totals - 1.0
    return min_perturbation_gap(s / (n + 1.0 - idx), eps)


_SAMPLERS = {METHOD_BETA: sample_beta_max, METHOD_GAMMA_RATIO: sample_gamma_ratio}


def gof_report(spec: EnsembleSpec, norm: Normalization, grid, samples: int = 0,
               seed: int = 0, method: str = METHOD_BETA) -> GofReport:
    """Sup distance of the exact standardized CDF from the limit law over a
    grid, plus (optionally) the KS statistic of a standardized sample."""
    grid = np.asarray(grid, dtype=np.float64)
    law = norm.law

    def grid_distance(x):
        return abs(standardized_cdf(spec, norm, float(x)) - law_cdf(law, float(x)))

    sup = max(indexed_map(grid_distance, grid))
    ks = 0.0
    if samples > 0:
        if method == "matrix":
            batch = oracle_radius(spec, samples, seed)
        else:
            batch = _SAMPLERS[method](spec, samples, seed)
        standardized = (batch.values - norm.A) / norm.B
        ks = ks_statistic(standardized, lambda v: law_cdf(law, v))
    return GofReport(ks_statistic=ks, sup_grid_distance=float(sup),
                     sample_count=samples, grid=tuple(float(g) for g in grid),
                     law=law, spec=spec)


def convergence_table(specs, regime: RegimeLabel, grid=None, samples: int = 0,
                      seed: int = 0, method: str = METHOD_BETA) -> list[GofReport]:
    """One GofReport per spec, all normalized under the same forced regime."""
    grid = make_grid(*DEFAULT_GRID) if grid is None else grid
    reports = []
    for spec in specs:
        norm = constants_for(spec, regime)
        reports.append(gof_report(spec, norm, grid, samples=samples, seed=seed,
                                  method=method))
    return reports
