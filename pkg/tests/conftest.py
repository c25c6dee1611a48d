"""
Pytest configuration and shared fixtures for irs-noma tests
"""
import os
import shutil
import tempfile

import pytest

from src.irs_noma.channel import LinkSet
from src.irs_noma.config import ScenarioConfig


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test outputs"""
    temp_path = tempfile.mkdtemp(prefix="irs_noma_test_")
    yield temp_path
    # Cleanup after test
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def example_config():
    """Example scenario: 32 elements, P1 = P2 = 20 dBm, P_w = -100 dBm"""
    return ScenarioConfig()


@pytest.fixture
def example_links(example_config) -> LinkSet:
    """Linear-unit links of the example scenario"""
    return example_config.links()


@pytest.fixture
def high_power_links() -> LinkSet:
    """Example scenario at P1 = P2 = 35 dBm"""
    return ScenarioConfig(p_tx_dbm=35.0).links()


@pytest.fixture
def small_links() -> LinkSet:
    """Example scenario with a 4-element surface, cheap to simulate"""
    return ScenarioConfig(n_elements=4).links()


@pytest.fixture
def density_config_file(temp_dir):
    """Scenario file of the 4-element density reproduction (m_BS = 3, m_g = 1)"""
    content = """# density of S1 and |S2| for a small surface
n_elements = 4
m_bs = 3
m_g1 = 1   # UE1-IRS links
m_g2 = 1
bins = 50
n_samples = 100000
seed = 7
"""
    path = os.path.join(temp_dir, "density.cfg")
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    return path


@pytest.fixture
def no_irs_config_file(temp_dir):
    """Scenario file of the no-IRS baseline with a short threshold sweep"""
    content = """strategy = no-irs
mode = snr
threshold_start_db = -5
threshold_stop_db = 5
threshold_step_db = 5
n_samples = 20000
seed = 11
"""
    path = os.path.join(temp_dir, "no_irs.cfg")
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    return path


@pytest.fixture
def broken_config_file(temp_dir):
    """Scenario file with a malformed third line"""
    content = """n_elements = 8
m_bs = 6
this line has no separator
"""
    path = os.path.join(temp_dir, "broken.cfg")
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    return path
