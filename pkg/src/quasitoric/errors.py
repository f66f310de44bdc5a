class QuasitoricError(Exception):
    """Base class for errors raised by this package."""


class SpecParseError(QuasitoricError, ValueError):
    """The polytope spec text is malformed."""


class ValidationError(QuasitoricError, ValueError):
    """Input data violates an invariant (empty polytope, zero normal, ...)."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class NonSimpleError(ValidationError):
    """A vertex has more than n active facets."""

    def __init__(self, point, active):
        self.point = point
        self.active = tuple(active)
        facets = ", ".join(str(j + 1) for j in self.active)
        super().__init__(
            f"non-simple vertex {list(map(float, point))} lies on "
            f"{len(self.active)} facets ({facets})",
            field="vertices",
        )


class ChartDomainError(QuasitoricError, ValueError):
    """A point lies outside the domain of the requested chart."""


class ConvergenceError(QuasitoricError, RuntimeError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
