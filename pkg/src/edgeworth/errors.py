"""Exception hierarchy shared by every module of the package."""


class EdgeworthError(Exception):
    """Base class for all package errors."""


class DimensionError(EdgeworthError, ValueError):
    """Array shapes or vector lengths do not agree."""


class BoundaryError(EdgeworthError, ValueError):
    """A holding sits at or below the boundary floor where gradients diverge."""


class NetworkError(EdgeworthError, ValueError):
    """Weight matrix is not symmetric, nonnegative and zero on the diagonal."""


class ProbabilityError(EdgeworthError, ValueError):
    """A vector that should lie on the probability simplex does not."""


class RangeError(EdgeworthError, ValueError):
    """A scalar argument lies outside its admissible range."""


class ParseError(EdgeworthError, ValueError):
    """An input file could not be parsed."""


class ValidationError(EdgeworthError, ValueError):
    """A scenario file parsed but failed schema validation.

    ``path`` names the offending field, e.g. ``"integrator.max_steps"``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class IntegrationError(EdgeworthError, RuntimeError):
    """Step-size control failed to make progress."""


class BoundaryApproachError(IntegrationError):
    """Repeated step halving could not keep the state above the boundary floor."""
