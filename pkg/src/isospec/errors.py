"""Exception types raised across the package."""


class ConstraintError(ValueError):
    """A point or tangent vector violates its model constraint."""


class DomainError(ValueError):
    """An argument lies outside the admissible range of a formula."""


class UsageError(ValueError):
    """Invalid call: wrong manifold, bad vector, unknown format tag, ..."""


class GenerationError(RuntimeError):
    """Random domain placement failed after the retry budget."""


class DegenerateDomainError(RuntimeError):
    """Rejection sampling accepted (almost) nothing."""


class EmptySelectionError(ValueError):
    """A restriction kept no nodes."""


class SingularityError(ValueError):
    """A singular kernel was evaluated at zero distance."""


class AdmissibilityError(ValueError):
    """Kernel parameters violate positivity, monotonicity or integrability."""


class AssemblyError(RuntimeError):
    """Operator matrix could not be assembled."""


class SolverError(RuntimeError):
    """Dense eigensolver failed to converge."""


class DivergenceError(ArithmeticError):
    """A radial integral does not converge at the origin."""
