"""
IRS-NOMA: outage analysis of a two-user uplink assisted by an intelligent
reflecting surface, under Nakagami-m fading, with a Monte-Carlo oracle
"""

__version__ = "0.1.0"

from .channel import LinkSet, Strategy, scenario_power_gammas
from .config import ScenarioConfig, load_config
from .errors import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    ConvergenceError,
    DegenerateError,
    DegenerateVarianceError,
    DomainError,
    IrsNomaError,
)
from .mcsim import EmpiricalCurve, empirical_density, empirical_outage
from .outage import OutageCurve, OutageMode, OutageQuery, UePowerStats, outage_curve

__all__ = [
    "ConfigError",
    "ConfigParseError",
    "ConfigValidationError",
    "ConvergenceError",
    "DegenerateError",
    "DegenerateVarianceError",
    "DomainError",
    "EmpiricalCurve",
    "IrsNomaError",
    "LinkSet",
    "OutageCurve",
    "OutageMode",
    "OutageQuery",
    "ScenarioConfig",
    "Strategy",
    "UePowerStats",
    "__version__",
    "empirical_density",
    "empirical_outage",
    "load_config",
    "outage_curve",
    "scenario_power_gammas",
]
