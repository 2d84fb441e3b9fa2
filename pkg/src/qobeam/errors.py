"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument violates a documented precondition."""


class SolverFailure(RuntimeError):
    """Fixed-point iteration did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class InfeasibleError(ValueError):
    """No value satisfies the requested constraint."""


class ScenarioFormatError(ValueError):
    """A scenario/plan/config file could not be parsed or validated."""
