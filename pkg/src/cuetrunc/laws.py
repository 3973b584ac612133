"""The three limit laws of the normalized spectral radius.

Gumbel exp(-e^-x) for the growing-depth regimes, the reversed Weibull
exp(-(-x)^k) on x <= 0 for fixed truncation depth k, and the minimum
variant 1 - Gumbel(-x) arising for the normalized minimum.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

_SAMPLE_TAG = 0x4C41575F  # stream tag for law_sample ("LAW_")


class LawKind(Enum):
    GUMBEL = "gumbel"
    REVERSED_WEIBULL = "reversed-weibull"
    GUMBEL_MIN = "gumbel-min"


@dataclass(frozen=True)
class LimitLaw:
    kind: LawKind
    k: int | None = None  # reversed-Weibull shape; None otherwise

    def __post_init__(self):
        if self.kind is LawKind.REVERSED_WEIBULL:
            if self.k is None or self.k < 1:
                raise DomainError("ReversedWeibull needs integer shape k >= 1")
        elif self.k is not None:
            raise DomainError(f"{self.kind.value} carries no shape parameter")

    @classmethod
    def gumbel(cls) -> "LimitLaw":
        return cls(LawKind.GUMBEL)

    @classmethod
    def reversed_weibull(cls, k: int) -> "LimitLaw":
        return cls(LawKind.REVERSED_WEIBULL, int(k))

    @classmethod
    def gumbel_min(cls) -> "LimitLaw":
        return cls(LawKind.GUMBEL_MIN)

    @property
    def name(self) -> str:
        if self.kind is LawKind.REVERSED_WEIBULL:
            return f"reversed-weibull({self.k})"
        return self.kind.value


def law_cdf(law: LimitLaw, x: float) -> float:
    if law.kind is LawKind.GUMBEL:
        return math.exp(-math.exp(-x))
    if law.kind is LawKind.REVERSED_WEIBULL:
        if x > 0.0:
            return 1.0
        return math.exp(-((-x) ** law.k))
    # minimum law: 1 - exp(-e^x)
    return -math.expm1(-math.exp(x))


def law_quantile(law: LimitLaw, q: float) -> float:
    if not 0.0 < q < 1.0:
        raise DomainError(f"law_quantile requires 0 < q < 1, got {q}")
    if law.kind is LawKind.GUMBEL:
        return -math.log(-math.log(q))
    if law.kind is LawKind.REVERSED_WEIBULL:
        return -((-math.log(q)) ** (1.0 / law.k))
    return math.log(-math.log1p(-q))


def law_sample(law: LimitLaw, count: int, seed: int):
    """Inverse-CDF draws; deterministic for a given seed, no global RNG."""
    if count < 1:
        raise DomainError(f"law_sample requires count >= 1, got {count}")
    ss = np.random.SeedSequence(entropy=(seed & 0xFFFFFFFFFFFFFFFF, _SAMPLE_TAG))
    rng = np.random.Generator(np.random.Philox(ss))
    u = rng.random(count)
    # keep u in the open interval so every quantile is finite
    u = np.clip(u, 1e-300, 1.0 - 1e-16)
    if law.kind is LawKind.GUMBEL:
        return -np.log(-np.log(u))
    if law.kind is LawKind.REVERSED_WEIBULL:
        return -((-np.log(u)) ** (1.0 / law.k))
    return np.log(-np.log1p(-u))
