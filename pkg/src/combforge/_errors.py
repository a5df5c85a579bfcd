"""Exception hierarchy shared by all combforge modules."""


class CombforgeError(Exception):
    """Base class for every error raised by combforge."""


class InputError(CombforgeError, ValueError):
    """Invalid input: malformed set, sequence or parameter."""


class ConvergenceError(CombforgeError, RuntimeError):
    """An iterative method stopped before reaching its tolerance.

    Parameters
    ----------
    message : str
        Human readable description.
    residual : float, optional
        Best residual (or bracket width) that was achieved.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its node budget."""
