"""
Tests for scenario configuration

Tests cover:
- Defaults of the example scenario
- Parsing of key = value files, comments and errors with line numbers
- Validation errors carrying the offending key
- Overrides and conversion to linear link parameters
"""
import math
import os

import pytest

from src.irs_noma.channel import Strategy
from src.irs_noma.config import (
    ALL_STRATEGIES,
    CONFIG_KEYS,
    ScenarioConfig,
    dbm_to_watts,
    load_config,
    parse_config_text,
    parse_mode,
    parse_strategy,
)
from src.irs_noma.errors import ConfigError, ConfigParseError, ConfigValidationError
from src.irs_noma.outage import OutageMode


class TestDefaults:
    """Test the example scenario defaults"""

    def test_example_values(self, example_config):
        assert example_config.n_elements == 32
        assert example_config.p_tx_dbm == 20.0
        assert example_config.p_noise_dbm == -100.0
        assert example_config.mode is OutageMode.IC
        assert example_config.strategy is None
        assert example_config.strategies() == ALL_STRATEGIES

    def test_threshold_sweep(self, example_config):
        thresholds = example_config.thresholds_db()
        assert len(thresholds) == 41
        assert thresholds[0] == -15.0 and thresholds[-1] == 25.0

    def test_fractional_step(self):
        config = ScenarioConfig(
            threshold_start_db=0.0, threshold_stop_db=1.0, threshold_step_db=0.1
        )
        thresholds = config.thresholds_db()
        assert len(thresholds) == 11
        assert thresholds[3] == 0.3

    def test_every_field_is_a_key(self):
        for key in CONFIG_KEYS:
            assert hasattr(ScenarioConfig(), key)

    def test_dbm_to_watts(self):
        assert dbm_to_watts(30.0) == 1.0
        assert dbm_to_watts(20.0) == pytest.approx(0.1)
        assert dbm_to_watts(-100.0) == pytest.approx(1e-13)


class TestChoices:
    """Test strategy and mode spellings"""

    @pytest.mark.parametrize("spelling", ["NoIRS", "no-irs", "no_irs", " NO-IRS "])
    def test_no_irs_spellings(self, spelling):
        assert parse_strategy(spelling) is Strategy.NO_IRS

    def test_boost_spellings(self):
        assert parse_strategy("BoostUE1") is Strategy.BOOST_UE1
        assert parse_strategy("boost_ue2") is Strategy.BOOST_UE2

    def test_all(self):
        assert parse_strategy("all") is None

    def test_unknown_strategy(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_strategy("boost-ue3")
        assert excinfo.value.key == "strategy"

    def test_modes(self):
        assert parse_mode("NoIC") is OutageMode.NOIC
        assert parse_mode("snr") is OutageMode.SNR
        with pytest.raises(ConfigValidationError):
            parse_mode("sic")


class TestParsing:
    """Test the key = value file format"""

    def test_comments_and_blank_lines(self):
        text = "# header\n\nn_elements = 8  # trailing\n   \nmode=snr\n"
        assert parse_config_text(text) == {"n_elements": "8", "mode": "snr"}

    @pytest.mark.parametrize(
        "text, line",
        [
            ("n_elements = 8\nm_bs 6\n", 2),
            ("= 6\n", 1),
            ("seed = 1\n\nseed =\n", 3),
            ("seed = 1\nseed = 2\n", 2),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config_text(text, "scenario.cfg")
        assert excinfo.value.line == line
        assert str(excinfo.value).startswith(f"scenario.cfg:{line}:")

    def test_load_file(self, density_config_file):
        config = load_config(density_config_file)
        assert config.n_elements == 4
        assert config.m_bs == 3.0
        assert config.m_g1 == 1.0
        assert config.bins == 50
        assert config.seed == 7
        # omitted keys keep the example values
        assert config.m_h1 == 4.0

    def test_broken_file(self, broken_config_file):
        with pytest.raises(ConfigParseError) as excinfo:
            load_config(broken_config_file)
        assert excinfo.value.line == 3
        assert isinstance(excinfo.value, ConfigError)

    def test_missing_file(self, temp_dir):
        with pytest.raises(OSError):
            load_config(os.path.join(temp_dir, "absent.cfg"))

    def test_scientific_integer(self):
        config = ScenarioConfig.from_mapping({"n_samples": "1e6"})
        assert config.n_samples == 1_000_000
        assert isinstance(config.n_samples, int)

    def test_no_irs_pathloss(self):
        config = ScenarioConfig.from_mapping({"ell_bs_db": "-inf"})
        assert not config.has_irs
        assert config.links().ell_bs == 0.0


class TestValidation:
    """Test validation errors carrying the offending key"""

    @pytest.mark.parametrize(
        "values, key",
        [
            ({"m_bs": "0.3"}, "m_bs"),
            ({"n_elements": "0"}, "n_elements"),
            ({"n_elements": "2.5"}, "n_elements"),
            ({"threshold_step_db": "0"}, "threshold_step_db"),
            ({"threshold_start_db": "10", "threshold_stop_db": "0"}, "threshold_stop_db"),
            ({"n_samples": "100"}, "n_samples"),
            ({"seed": "-1"}, "seed"),
            ({"confidence": "1.5"}, "confidence"),
            ({"ell_g1_db": "inf"}, "ell_g1_db"),
            ({"p_tx_dbm": "loud"}, "p_tx_dbm"),
            ({"volume": "11"}, "volume"),
        ],
    )
    def test_invalid_values(self, values, key):
        with pytest.raises(ConfigValidationError) as excinfo:
            ScenarioConfig.from_mapping(values)
        assert excinfo.value.key == key

    def test_zero_elements_allowed_without_surface(self):
        config = ScenarioConfig(n_elements=0, strategy="no-irs")
        assert not config.has_irs


class TestOverrides:
    """Test overrides and linear conversion"""

    def test_none_is_ignored(self, example_config):
        assert example_config.with_overrides(seed=None, mode=None) == example_config

    def test_override_revalidates(self, example_config):
        with pytest.raises(ConfigValidationError):
            example_config.with_overrides(n_samples=5)

    def test_unknown_override(self, example_config):
        with pytest.raises(ConfigValidationError):
            example_config.with_overrides(colour="blue")

    def test_string_overrides_are_parsed(self, example_config):
        config = example_config.with_overrides(mode="noic", strategy="boost-ue2", p_tx_dbm=35.0)
        assert config.mode is OutageMode.NOIC
        assert config.strategies() == (Strategy.BOOST_UE2,)
        assert config.links().p_tx == pytest.approx((dbm_to_watts(35.0),) * 2)

    def test_per_ue_power(self):
        config = ScenarioConfig(p_tx_dbm=20.0, p2_dbm=30.0)
        assert config.tx_powers_dbm() == (20.0, 30.0)
        assert config.links().p_tx == pytest.approx((0.1, 1.0))

    def test_links_in_linear_units(self, example_config):
        links = example_config.links()
        assert links.ell_bs == pytest.approx(1e-6)
        assert links.ell_h == pytest.approx((1e-11, 1e-12))
        assert links.p_noise == pytest.approx(1e-13)
        assert links.m_h == (4.0, 1.1)

    def test_no_irs_strategy_drops_surface(self):
        assert ScenarioConfig(strategy="NoIRS").links().ell_bs == 0.0
        assert math.isfinite(ScenarioConfig().links().ell_bs)
