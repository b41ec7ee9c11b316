"""Exception hierarchy.  The CLI maps each family to an exit code."""


class ErgoError(Exception):
    exit_code = 1


class ConfigurationError(ErgoError, ValueError):
    """Invalid model or run configuration (e.g. qubit count out of range)."""


class ModelValidationError(ConfigurationError):
    """Anisotropies inconsistent with the named model preset."""


class ArgumentError(ErgoError, ValueError):
    """Bad argument to a primitive: qubit index, parameter count, dimensions."""


class NumericalError(ErgoError, ArithmeticError):
    """Non-finite values or solver failure.

    ``trajectory`` carries whatever partial history was produced, for diagnosis.
    """

    exit_code = 2

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class UndefinedEfficiencyError(NumericalError):
    """Efficiency requested for a battery with zero ergotropy."""
