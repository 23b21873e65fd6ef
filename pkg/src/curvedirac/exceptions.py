"""Exception and warning types shared across the package."""


class CurveDiracError(Exception):
    """Base class for errors raised by this package."""


class DomainError(CurveDiracError, ValueError):
    """A metric or profile was evaluated outside its domain of validity."""

    def __init__(self, message: str, point=None):
        if point is not None:
            message = f"{message} at point {tuple(float(p) for p in point)}"
        super().__init__(message)
        self.point = None if point is None else tuple(point)


class DomainTooSmallError(CurveDiracError, ValueError):
    """The periodic box is too small for the requested wave packet."""


class ResonanceError(CurveDiracError, ValueError):
    """Closed-form Bogolyubov coefficients degenerate at k == m."""


class NumericalError(CurveDiracError, RuntimeError):
    """An integrator failed its accuracy or unitarity contract."""


class UnreliableObservableWarning(UserWarning):
    """An observable was computed for a packet touching the box edges."""


class EdgeReflectionWarning(UserWarning):
    """Light reached the outermost waveguides of a finite array."""
