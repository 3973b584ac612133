"""cuetrunc: spectral radius of truncated Haar-unitary matrices.

Exact finite-n distribution of the largest eigenvalue modulus of the
leading p x p block of an n x n Haar unitary, the extreme-value
normalizing constants for every truncation regime, fast Monte Carlo
samplers, and convergence diagnostics.

The hot kernels run on a compiled extension when available; set
``CUETRUNC_PURE=1`` to force the pure numpy fallback and
``CUETRUNC_THREADS`` to cap worker threads (never affects results).
"""

from ._backend import BACKEND
from .diagnostics import (CheckResult, GofReport, convergence_table,
                          gof_report, ks_statistic, make_grid)
from .errors import AmbiguousRegimeError, ConvergenceError, DomainError
from .exact import radius_cdf, radius_log_cdf, radius_quantile, standardized_cdf
from .laws import LawKind, LimitLaw, law_cdf, law_quantile, law_sample
from .normalization import (EnsembleSpec, LambdaSolution, Normalization,
                            RegimeLabel, classify_regime, combined_constants,
                            constants_for, fixed_k_constants,
                            intermediate_constants, order_scaled_lambda,
                            scaling_equation, scaling_target, shifted_lambda,
                            solve_lambda, sublog_constants)
from .sampling import (SampleBatch, dominant_modulus, min_perturbation_gap,
                       oracle_radius, sample_beta_max, sample_gamma_ratio,
                       sample_haar_unitary)
from .special import (ApproxValue, betainc, erfc, eta, gammainc_p,
                      gammainc_p_log, gammainc_p_uniform,
                      gammainc_p_uniform_log, ln_gamma, log_phi, phi, tau)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "AmbiguousRegimeError",
    "ApproxValue",
    "CheckResult",
    "ConvergenceError",
    "DomainError",
    "EnsembleSpec",
    "GofReport",
    "LambdaSolution",
    "LawKind",
    "LimitLaw",
    "Normalization",
    "RegimeLabel",
    "SampleBatch",
    "betainc",
    "classify_regime",
    "combined_constants",
    "constants_for",
    "convergence_table",
    "dominant_modulus",
    "erfc",
    "eta",
    "fixed_k_constants",
    "gammainc_p",
    "gammainc_p_log",
    "gammainc_p_uniform",
    "gammainc_p_uniform_log",
    "gof_report",
    "intermediate_constants",
    "ks_statistic",
    "law_cdf",
    "law_quantile",
    "law_sample",
    "ln_gamma",
    "log_phi",
    "make_grid",
    "min_perturbation_gap",
    "oracle_radius",
    "order_scaled_lambda",
    "phi",
    "radius_cdf",
    "radius_log_cdf",
    "radius_quantile",
    "sample_beta_max",
    "sample_gamma_ratio",
    "sample_haar_unitary",
    "scaling_equation",
    "scaling_target",
    "shifted_lambda",
    "solve_lambda",
    "standardized_cdf",
    "sublog_constants",
    "tau",
]
