"""
errors.py

Exception hierarchy shared by every quasipath layer.

Invariant and precondition checks raise these explicitly instead of using
`assert` (assertions are stripped under -O). Each error also derives from the
closest builtin so callers can catch ValueError / RuntimeError generically.
"""

from typing import Any, Optional, Sequence


class QuasipathError(Exception):
    """Root of all library errors"""


class ConfigError(QuasipathError, ValueError):
    """Invalid parameters, empty grids, inconsistent scenario sections"""


class ScenarioParseError(ConfigError):
    """Malformed scenario text; carries the 1-based line number when known"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class InvalidCurveError(QuasipathError, ValueError):
    """Ragged, non-finite or too-short node lists; dimension mismatches"""


class DegenerateCurveError(QuasipathError, ValueError):
    """Zero-length curve where a positive length is required"""


class EndpointMismatchError(QuasipathError, ValueError):
    """concat junction points differ"""

    def __init__(self, message: str, gap: float):
        self.gap = gap
        super().__init__(message)


class DivergenceError(QuasipathError, RuntimeError):
    """Flow state left the admissible bound before the requested time"""

    def __init__(self, message: str, exit_time: float, state: Optional[Sequence[float]] = None):
        self.exit_time = exit_time
        self.state = None if state is None else tuple(float(v) for v in state)
        super().__init__(message)


class NotInBasinError(QuasipathError, RuntimeError):
    """Point escaped before approaching the equilibrium"""

    def __init__(self, message: str, point: Sequence[float]):
        self.point = tuple(float(v) for v in point)
        super().__init__(message)


class DegenerateSaddleError(QuasipathError, ValueError):
    """Saddle eigenvectors are complex or (nearly) parallel"""


class MetricError(QuasipathError, ValueError):
    """Matrix field is not symmetric positive definite"""


class DomainError(QuasipathError, ValueError):
    """Evaluation outside the admissible domain (U < 0, curve outside K)"""


class SolverFailureError(QuasipathError, RuntimeError):
    """Newton iteration did not reach the residual tolerance"""

    def __init__(self, message: str, best_residual: float):
        self.best_residual = float(best_residual)
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class EmptyManifoldError(QuasipathError, ValueError):
    """No zero-set point of a level function was located"""


class NotReachableError(QuasipathError, RuntimeError):
    """No manifold crossing within the time budget"""

    def __init__(self, message: str, point: Sequence[float]):
        self.point = tuple(float(v) for v in point)
        super().__init__(message)


class ShrinkEpsError(QuasipathError, RuntimeError):
    """A tracing sample could not be reached; a smaller eps is needed"""

    def __init__(self, message: str, eps: float):
        self.eps = eps
        super().__init__(f"{message}; try a smaller eps than {eps:g}")


class PreconditionError(QuasipathError, ValueError):
    """Operation called outside its documented precondition"""


class ActionEvaluationError(QuasipathError, RuntimeError):
    """Local action failed while minimizing"""

    def __init__(self, message: str, iteration: int, cause: Optional[BaseException] = None):
        self.iteration = iteration
        self.cause: Any = cause
        super().__init__(f"iteration {iteration}: {message}")


class LedgerIntegrityError(QuasipathError, RuntimeError):
    """Report ledger fails its chain or root check"""
