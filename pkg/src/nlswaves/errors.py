"""Exception types shared across the package."""


class NlswavesError(Exception):
    """Base class for all package-specific errors."""


class TruncationMismatch(NlswavesError, ValueError):
    """Two coefficient vectors with different truncations were combined."""


class NonConvergence(NlswavesError):
    """Newton refinement did not reach the requested residual."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )


class SingularJacobian(NlswavesError):
    """The Newton linear solve lost rank; the seed is outside the solvable regime."""


class EigensolverError(NlswavesError):
    """The dense eigensolver failed to converge."""


class WrongClusterSize(NlswavesError):
    """The near-origin eigenvalue cluster does not contain exactly four members."""

    def __init__(self, count: int, counts_by_radius: dict[float, int]):
        self.count = count
        self.counts_by_radius = counts_by_radius
        detail = ", ".join(f"r={r:g}: {c}" for r, c in sorted(counts_by_radius.items()))
        super().__init__(f"expected 4 eigenvalues in the cluster, found {count} ({detail})")


class ClusterAmbiguity(NlswavesError):
    """The four smallest Hessian eigenvalues are not separated from the rest."""


class NoGrowthFound(NlswavesError):
    """No unstable growth above tolerance on the scanned Floquet interval."""


class BlowupDetected(NlswavesError):
    """A coefficient exceeded the overflow guard during time integration."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"overflow guard tripped at t={t:g}")


class DegenerateFit(NlswavesError):
    """The distance samples span too small a range for a growth-rate fit."""
