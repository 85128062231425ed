"""Exception hierarchy. Each class maps onto one CLI exit code."""


class JacobsthalError(Exception):
    exit_code = 2


class InputError(JacobsthalError, ValueError):
    """Rejected arguments (non-coprime moduli, zero residues, bad configs)."""


class ConfigError(InputError):
    pass


class DataError(InputError):
    """Inconsistent function values, e.g. Omega(k+1) <= Omega(k)."""


class FormatError(JacobsthalError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeGuardError(JacobsthalError):
    """An instance exceeds a feasibility guard."""

    exit_code = 3


class RegressionError(JacobsthalError):
    """A computed value disagrees with the published tables."""

    exit_code = 1


class VerificationError(JacobsthalError):
    exit_code = 1
