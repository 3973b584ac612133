"""Monte Carlo spectral-radius samplers.

Two fast representation paths (max of Beta variables; coupled Gamma
ratios) share the exact finite-n law, and a slow full-matrix oracle draws
a Haar unitary, truncates it and extracts the dominant eigenvalue modulus
by power iteration.

Every sample owns a counter-based RNG stream keyed by (master seed, sample
index, method tag), so batches are bit-identical for any worker count or
chunking of the index range.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._threads import indexed_map
from .errors import DomainError
from .normalization import EnsembleSpec

METHOD_BETA = "beta"
METHOD_GAMMA_RATIO = "gamma-ratio"
METHOD_MATRIX = "matrix"

_METHOD_TAGS = {METHOD_BETA: 1, METHOD_GAMMA_RATIO: 2, METHOD_MATRIX: 3}

ORACLE_MAX_N = 256
ORACLE_MAX_COUNT = 10_000

POWER_TOL = 1e-9
POWER_MAX_ITER = 100_000
POWER_RESTARTS = 5

_CHUNK = 1024


@dataclass(frozen=True)
class SampleBatch:
    """Spectral-radius draws with full provenance."""

    values: np.ndarray
    spec: EnsembleSpec
    seed: int
    method: str
    excluded: int = 0
    requested: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.requested == 0:
            object.__setattr__(self, "requested", len(self.values) + self.excluded)


def sample_stream(seed: int, index: int, method: str) -> np.random.Generator:
    """Counter-based per-sample stream: Philox keyed by a 128-bit hash of
    (master seed, sample index, method tag)."""
    ss = np.random.SeedSequence(
        entropy=(seed & 0xFFFFFFFFFFFFFFFF, index, _METHOD_TAGS[method])
    )
    return np.random.Generator(np.random.Philox(ss))


def _run_indexed(count, one_sample):
    """Fill out[i] = one_sample(i) over index chunks (parallel-safe)."""
    out = np.empty(count, dtype=np.float64)

    def run_chunk(bounds):
        lo, hi = bounds
        for i in range(lo, hi):
            out[i] = one_sample(i)

    chunks = [(lo, min(lo + _CHUNK, count)) for lo in range(0, count, _CHUNK)]
    indexed_map(run_chunk, chunks)
    return out


def sample_beta_max(spec: EnsembleSpec, count: int, seed: int) -> SampleBatch:
    """Radius draws as sqrt(max of Beta(i, k) variables, i = 1..p)."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    shapes = np.arange(1, spec.p + 1, dtype=np.float64)
    k = float(spec.k)

    def one(i):
        rng = sample_stream(seed, i, METHOD_BETA)
        return math.sqrt(rng.beta(shapes, k).max())

    values = _run_indexed(count, one)
    return SampleBatch(values=values, spec=spec, seed=seed, method=METHOD_BETA)


def sample_gamma_ratio(spec: EnsembleSpec, count: int, seed: int) -> SampleBatch:
    """Radius draws through the coupled Gamma representation.

    Column j pairs S_j ~ Gamma(k) with T_j = S_j + Gamma(p + 1 - j), so
    each ratio 1 - S_j / T_j is the Beta variable of the exact law; the
    S/T coupling within a column is what preserves the joint law.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    k = float(spec.k)
    rest_shapes = np.arange(spec.p, 0, -1, dtype=np.float64)  # p + 1 - j

    def one(i):
        rng = sample_stream(seed, i, METHOD_GAMMA_RATIO)
        s = rng.standard_gamma(k, size=spec.p)
        g = rng.standard_gamma(rest_shapes)
        return math.sqrt((g / (s + g)).max())

    values = _run_indexed(count, one)
    return SampleBatch(values=values, spec=spec, seed=seed, method=METHOD_GAMMA_RATIO)


def _haar_from(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_haar_unitary(n: int, seed: int) -> np.ndarray:
    """One Haar-distributed n x n unitary (QR of complex Ginibre with the
    R-diagonal phase normalization)."""
    if not 1 <= n <= ORACLE_MAX_N:
        raise DomainError(f"haar sampling capped at n <= {ORACLE_MAX_N}, got {n}")
    return _haar_from(sample_stream(seed, 0, METHOD_MATRIX), n)


def dominant_modulus(matrix: np.ndarray, rng: np.random.Generator,
                     tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER,
                     restarts: int = POWER_RESTARTS):
    """Spectral radius of a (possibly non-normal) complex matrix.

    Power iteration with a random complex start; converged when the
    Rayleigh-quotient modulus moves by at most ``tol`` between iterates.
    Returns (value, converged); restarting with fresh starts up to
    ``restarts`` times before giving up.
    """
    p = matrix.shape[0]
    value = 0.0
    for _ in range(restarts + 1):
        v = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        v /= np.linalg.norm(v)
        prev = math.inf
        for _ in range(max_iter):
            w = matrix @ v
            value = abs(np.vdot(v, w))
            norm = np.linalg.norm(w)
            if norm == 0.0:
                break  # nilpotent direction; restart
            v = w / norm
            if abs(value - prev) <= tol:
                return value, True
            prev = value
    return value, False


def oracle_radius(spec: EnsembleSpec, count: int, seed: int) -> SampleBatch:
    """Full-matrix oracle: Haar unitary -> leading p x p block -> radius.

    Power iteration runs batched over draws for speed; each draw's result
    depends only on its own stream, so batching is invisible in the output.
    Draws whose iteration never converges (near-tied leading moduli) are
    excluded and counted.
    """
    n, p = spec.n, spec.p
    if n > ORACLE_MAX_N:
        raise DomainError(f"matrix oracle capped at n <= {ORACLE_MAX_N}, got n={n}")
    if not 1 <= count <= ORACLE_MAX_COUNT:
        raise DomainError(f"oracle count must lie in [1, {ORACLE_MAX_COUNT}], got {count}")

    chunk = max(1, min(256, (1 << 26) // (p * p * 16)))
    values = np.full(count, np.nan)

    def run_chunk(bounds):
        lo, hi = bounds
        rngs = [sample_stream(seed, i, METHOD_MATRIX) for i in range(lo, hi)]
        blocks = np.empty((hi - lo, p, p), dtype=np.complex128)
        starts = np.empty((hi - lo, p), dtype=np.complex128)
        for j, rng in enumerate(rngs):
            blocks[j] = _haar_from(rng, n)[:p, :p]
            v = rng.standard_normal(p) + 1j * rng.standard_normal(p)
            starts[j] = v / np.linalg.norm(v)
        frozen = _power_batch(blocks, starts)
        for j, rng in enumerate(rngs):
            if math.isnan(frozen[j]):
                # rare slow/tied draw: retry individually with fresh starts
                val, ok = dominant_modulus(blocks[j], rng)
                frozen[j] = val if ok else math.nan
        values[lo:hi] = frozen

    chunks = [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
    indexed_map(run_chunk, chunks)

    kept = values[~np.isnan(values)]
    return SampleBatch(values=kept, spec=spec, seed=seed, method=METHOD_MATRIX,
                       excluded=int(count - len(kept)), requested=count)


def _power_batch(blocks: np.ndarray, starts: np.ndarray,
                 tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> np.ndarray:
    """Vectorized power iteration; NaN marks draws that did not converge.

    Each draw's value freezes at its own first convergence, so results do
    not depend on which draws share the batch.
    """
    m = blocks.shape[0]
    out = np.full(m, np.nan)
    active = np.arange(m)
    v = starts.copy()
    prev = np.full(m, np.inf)
    check_every = 1000
    for it in range(max_iter):
        idx = active
        w = np.matmul(blocks[idx], v[idx, :, None])[:, :, 0]
        ray = np.abs(np.einsum("ij,ij->i", v[idx].conj(), w))
        norms = np.linalg.norm(w, axis=1)
        norms[norms == 0.0] = 1.0
        v[idx] = w / norms[:, None]
        unseen = np.isnan(out[idx])
        done = (np.abs(ray - prev[idx]) <= tol) & unseen
        out[idx[done]] = ray[done]
        prev[idx] = ray
        if done.any() or (it % check_every == check_every - 1):
            active = idx[np.isnan(out[idx])]
            if active.size == 0:
                return out
    return out


def min_perturbation_gap(values, rel_perturbations):
    """(observed, bound) for the min under relative perturbations.

    For positive values x_i and |eps_i| <= eps < 1, the min of
    x_i (1 + eps_i) stays within eps * min(x_i) of min(x_i); callers use
    the returned bound to budget ratio-concentration effects.
    """
    x = np.asarray(values, dtype=np.float64)
    e = np.asarray(rel_perturbations, dtype=np.float64)
    if x.size == 0 or (x <= 0).any():
        raise DomainError("min_perturbation_gap requires a nonempty positive array")
    eps = float(np.abs(e).max())
    if eps >= 1.0:
        raise DomainError(f"perturbations must satisfy |eps| < 1, got max {eps}")
    observed = abs(float((x * (1.0 + e)).min()) - float(x.min()))
    return observed, eps * float(x.min())
