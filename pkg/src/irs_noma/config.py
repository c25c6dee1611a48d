"""
Scenario configuration

A scenario file is plain text, one `key = value` per line, `#` starts a
comment. Omitted keys take the defaults of the example scenario
(32 elements, P = 20 dBm). Values are in configuration units (dB, dBm) and
are converted to linear units exactly once, in `ScenarioConfig.links()`.
"""

import logging
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from .channel import LinkSet, Strategy
from .errors import ConfigParseError, ConfigValidationError
from .mcsim import DEFAULT_BINS, DEFAULT_CONFIDENCE, MIN_OUTAGE_SAMPLES
from .outage import OutageMode, db_to_linear

logger = logging.getLogger(__name__)

ALL_STRATEGIES = (Strategy.BOOST_UE1, Strategy.BOOST_UE2, Strategy.NO_IRS)

CONFIG_KEYS: Dict[str, str] = {
    "n_elements": "number of IRS elements N (integer)",
    "m_bs": "Nakagami shape of the BS-IRS links",
    "m_h1": "Nakagami shape of the UE1-BS direct link",
    "m_h2": "Nakagami shape of the UE2-BS direct link",
    "m_g1": "Nakagami shape of the UE1-IRS links",
    "m_g2": "Nakagami shape of the UE2-IRS links",
    "ell_bs_db": "BS-IRS pathloss [dB], -inf removes the IRS",
    "ell_h1_db": "UE1-BS pathloss [dB]",
    "ell_h2_db": "UE2-BS pathloss [dB]",
    "ell_g1_db": "UE1-IRS pathloss [dB]",
    "ell_g2_db": "UE2-IRS pathloss [dB]",
    "p_tx_dbm": "transmit power of both UEs [dBm]",
    "p1_dbm": "transmit power of UE1 [dBm], overrides p_tx_dbm",
    "p2_dbm": "transmit power of UE2 [dBm], overrides p_tx_dbm",
    "p_noise_dbm": "noise power P_w [dBm]",
    "threshold_start_db": "first outage threshold [dB]",
    "threshold_stop_db": "last outage threshold [dB]",
    "threshold_step_db": "outage threshold step [dB]",
    "strategy": "boost-ue1 | boost-ue2 | no-irs | all",
    "mode": "noic | ic | snr",
    "n_samples": "Monte-Carlo realizations",
    "seed": "Monte-Carlo seed (non-negative integer)",
    "bins": "histogram bins of the density subcommand",
    "workers": "Monte-Carlo worker threads",
    "confidence": "confidence level of the empirical intervals",
}

_INT_KEYS = {"n_elements", "n_samples", "seed", "bins", "workers"}
_SHAPE_KEYS = ("m_bs", "m_h1", "m_h2", "m_g1", "m_g2")
_PATHLOSS_KEYS = ("ell_bs_db", "ell_h1_db", "ell_h2_db", "ell_g1_db", "ell_g2_db")


def dbm_to_watts(value_dbm: float) -> float:
    """10^((dBm - 30) / 10)"""
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def _normalize_choice(value: str) -> str:
    return value.strip().lower().replace("-", "").replace("_", "")


def parse_strategy(value: Union[str, Strategy, None]) -> Optional[Strategy]:
    """Strategy from its spelling; `all` (or None) selects every strategy"""
    if value is None or isinstance(value, Strategy):
        return value
    token = _normalize_choice(value)
    if token == "all":
        return None
    for strategy in Strategy:
        if _normalize_choice(strategy.value) == token:
            return strategy
    raise ConfigValidationError("strategy", f"unknown strategy {value!r}")


def parse_mode(value: Union[str, OutageMode]) -> OutageMode:
    if isinstance(value, OutageMode):
        return value
    token = _normalize_choice(value)
    for mode in OutageMode:
        if mode.value == token:
            return mode
    raise ConfigValidationError("mode", f"unknown mode {value!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario, sweep and Monte-Carlo settings in configuration units"""

    n_elements: int = 32
    m_bs: float = 6.0
    m_h1: float = 4.0
    m_h2: float = 1.1
    m_g1: float = 2.25
    m_g2: float = 2.25
    ell_bs_db: float = -60.0
    ell_h1_db: float = -110.0
    ell_h2_db: float = -120.0
    ell_g1_db: float = -60.0
    ell_g2_db: float = -60.0
    p_tx_dbm: float = 20.0
    p1_dbm: Optional[float] = None
    p2_dbm: Optional[float] = None
    p_noise_dbm: float = -100.0
    threshold_start_db: float = -15.0
    threshold_stop_db: float = 25.0
    threshold_step_db: float = 1.0
    strategy: Optional[Strategy] = None
    mode: OutageMode = OutageMode.IC
    n_samples: int = 10_000_000
    seed: int = 0
    bins: int = DEFAULT_BINS
    workers: int = 1
    confidence: float = DEFAULT_CONFIDENCE

    def __post_init__(self):
        object.__setattr__(self, "strategy", parse_strategy(self.strategy))
        object.__setattr__(self, "mode", parse_mode(self.mode))
        self._validate()

    def _validate(self) -> None:
        for key in _SHAPE_KEYS:
            value = getattr(self, key)
            if not (math.isfinite(value) and value >= 0.5):
                raise ConfigValidationError(key, f"Nakagami shape must be >= 0.5, got {value!r}")
        for key in _PATHLOSS_KEYS:
            value = getattr(self, key)
            if math.isnan(value) or value == math.inf:
                raise ConfigValidationError(key, f"pathloss must be finite or -inf, got {value!r}")
        for key in ("p_tx_dbm", "p1_dbm", "p2_dbm", "p_noise_dbm"):
            value = getattr(self, key)
            if value is not None and not math.isfinite(value):
                raise ConfigValidationError(key, f"power must be finite, got {value!r}")
        if self.n_elements < 0 or (self.has_irs and self.n_elements < 1):
            raise ConfigValidationError(
                "n_elements", f"an IRS needs at least one element, got {self.n_elements!r}"
            )
        for key in ("threshold_start_db", "threshold_stop_db"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigValidationError(key, "threshold must be finite")
        if not (math.isfinite(self.threshold_step_db) and self.threshold_step_db > 0.0):
            raise ConfigValidationError("threshold_step_db", "step must be > 0")
        if self.threshold_stop_db < self.threshold_start_db:
            raise ConfigValidationError("threshold_stop_db", "stop must not precede start")
        if self.n_samples < MIN_OUTAGE_SAMPLES:
            raise ConfigValidationError("n_samples", f"must be >= {MIN_OUTAGE_SAMPLES}")
        if self.seed < 0:
            raise ConfigValidationError("seed", "must be non-negative")
        if self.bins < 1:
            raise ConfigValidationError("bins", "must be >= 1")
        if self.workers < 1:
            raise ConfigValidationError("workers", "must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigValidationError("confidence", "must lie in (0, 1)")

    @property
    def has_irs(self) -> bool:
        return self.ell_bs_db != -math.inf and self.strategy is not Strategy.NO_IRS

    def strategies(self) -> Tuple[Strategy, ...]:
        return ALL_STRATEGIES if self.strategy is None else (self.strategy,)

    def thresholds_db(self) -> List[float]:
        """Threshold grid from start to stop (inclusive) in steps"""
        span = self.threshold_stop_db - self.threshold_start_db
        count = int(math.floor(span / self.threshold_step_db + 1e-9)) + 1
        return [
            round(self.threshold_start_db + i * self.threshold_step_db, 12) for i in range(count)
        ]

    def tx_powers_dbm(self) -> Tuple[float, float]:
        return (
            self.p_tx_dbm if self.p1_dbm is None else self.p1_dbm,
            self.p_tx_dbm if self.p2_dbm is None else self.p2_dbm,
        )

    def links(self) -> LinkSet:
        """Linear-unit link parameters of the scenario"""
        return LinkSet(
            n_elements=self.n_elements,
            m_bs=self.m_bs,
            ell_bs=db_to_linear(self.ell_bs_db) if self.has_irs else 0.0,
            m_h=(self.m_h1, self.m_h2),
            ell_h=(db_to_linear(self.ell_h1_db), db_to_linear(self.ell_h2_db)),
            m_g=(self.m_g1, self.m_g2),
            ell_g=(db_to_linear(self.ell_g1_db), db_to_linear(self.ell_g2_db)),
            p_tx=tuple(dbm_to_watts(p) for p in self.tx_powers_dbm()),
            p_noise=dbm_to_watts(self.p_noise_dbm),
        )

    def with_overrides(self, **overrides: Any) -> "ScenarioConfig":
        """Copy with the non-None overrides applied and re-validated"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        unknown = sorted(set(changes) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigValidationError(unknown[0], "unknown configuration key")
        return replace(self, **changes)

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "ScenarioConfig":
        """Config from raw string values keyed by configuration key"""
        typed = {key: _coerce(key, raw) for key, raw in values.items()}
        omitted = [f.name for f in fields(cls) if f.name not in typed]
        if omitted:
            logger.debug("defaults applied for %s", ", ".join(omitted))
        return cls(**typed)


def _coerce(key: str, raw: str) -> Any:
    if key not in CONFIG_KEYS:
        raise ConfigValidationError(key, "unknown configuration key")
    raw = raw.strip()
    if key == "strategy":
        return parse_strategy(raw)
    if key == "mode":
        return parse_mode(raw)
    try:
        value = float(raw)
    except ValueError:
        raise ConfigValidationError(key, f"expected a number, got {raw!r}") from None
    if key in _INT_KEYS:
        # 1e7 is accepted for n_samples
        if not value.is_integer():
            raise ConfigValidationError(key, f"expected an integer, got {raw!r}")
        return int(value)
    return value


def parse_config_text(text: str, path: Optional[str] = None) -> Dict[str, str]:
    """Raw `key = value` pairs of a config file body"""
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigParseError(f"expected 'key = value', got {content!r}", number, path)
        key, value = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigParseError("missing key before '='", number, path)
        if not value:
            raise ConfigParseError(f"missing value for {key!r}", number, path)
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r}", number, path)
        values[key] = value
    return values


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Load and validate a scenario file.

    Raises:
        ConfigParseError: malformed line (carries the line number)
        ConfigValidationError: bad or unknown key (carries the key)
        OSError: file cannot be read
    """
    path = str(path)
    text = Path(path).read_text(encoding="utf-8")
    return ScenarioConfig.from_mapping(parse_config_text(text, path))


__all__ = [
    "ALL_STRATEGIES",
    "CONFIG_KEYS",
    "ScenarioConfig",
    "dbm_to_watts",
    "load_config",
    "parse_config_text",
    "parse_mode",
    "parse_strategy",
]
