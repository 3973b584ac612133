"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure exhausted its iteration budget."""


class AmbiguousRegimeError(ValueError):
    """Automatic regime classification could not pick a unique regime.

    Carries the candidate regime labels so callers (notably the CLI) can
    report which regimes the user may force.
    """

    def __init__(self, candidates):
        self.candidates = list(candidates)
        names = ", ".join(c.value for c in self.candidates) or "none"
        super().__init__(
            f"regime is ambiguous for this (n, k); candidates: {names}. "
            "Force one with an explicit regime."
        )
