"""Exception types shared across the simulator."""


class DimensionError(ValueError):
    """Raised when subsystem dimensions are incompatible or exceed the engine cap."""


class ScenarioNotFoundError(ValueError):
    """Raised when a named scenario has no file in the scenario directory."""


class NumericalError(RuntimeError):
    """Raised when an estimator fails to produce a usable result."""

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
