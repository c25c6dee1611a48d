"""
Exception hierarchy for irs-noma

All library errors derive from IrsNomaError so callers (the CLI and the MCP
tools) can catch one type and report it.
"""

from typing import Optional, Type


class IrsNomaError(Exception):
    """Base class for every error raised by the package"""


class DomainError(IrsNomaError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class DegenerateError(IrsNomaError, ArithmeticError):
    """A distribution fit collapsed to a (near) deterministic value"""


class DegenerateVarianceError(DegenerateError):
    """Second raw moment too close to the squared mean for a Gamma fit"""


class ConvergenceError(IrsNomaError, ArithmeticError):
    """Series or continued fraction hit its iteration cap"""


class ConfigError(IrsNomaError):
    """Scenario configuration could not be loaded"""


class ConfigParseError(ConfigError):
    """Malformed line in a configuration file"""

    def __init__(self, message: str, line: int, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


class ConfigValidationError(ConfigError):
    """A configuration key holds a value that violates its constraint"""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def require(condition: bool, message: str, exc: Type[IrsNomaError] = DomainError) -> None:
    """Raise `exc(message)` unless `condition` holds"""
    if not condition:
        raise exc(message)
