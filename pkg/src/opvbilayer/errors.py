"""Exception types shared across the package."""

__all__ = ["PivotBreakdownError", "AsymptoticsError", "ConfigError", "ConvergenceError",
           "CharacteristicPointError"]


class PivotBreakdownError(ArithmeticError):
    """Near-zero pivot in banded elimination.

    Attributes
    ----------
    row : int
        Index of the offending row.
    equation : str or None
        Tag of the equation being solved, filled in by the caller.
    """

    def __init__(self, row: int, pivot: float, equation: str | None = None):
        self.row = int(row)
        self.pivot = float(pivot)
        self.equation = equation
        where = f" in {equation} system" if equation else ""
        super().__init__(f"pivot breakdown at row {self.row}{where} (pivot={self.pivot:.3e})")


class AsymptoticsError(ValueError):
    """Asymptotic formula evaluated outside its domain."""


class ConfigError(ValueError):
    """Invalid configuration file or option."""


class ConvergenceError(RuntimeError):
    """Nonlinear iteration failed to reach its tolerance."""


class CharacteristicPointError(RuntimeError):
    """A characteristic IV point could not be located."""
