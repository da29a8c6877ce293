import pytest

from multicov import load_preset
from multicov.simulator import run_trials


@pytest.fixture(scope="session")
def urban_cfg():
    return load_preset("urban")


@pytest.fixture(scope="session")
def suburban_cfg():
    return load_preset("suburban")


@pytest.fixture(scope="session")
def urban(urban_cfg):
    return urban_cfg.model


@pytest.fixture(scope="session")
def suburban(suburban_cfg):
    return suburban_cfg.model


@pytest.fixture(scope="session")
def urban_table(urban_cfg):
    # 1e5 projected trials with fading marks; shared by every MC comparison
    return run_trials(urban_cfg)


@pytest.fixture(scope="session")
def suburban_table(suburban_cfg):
    return run_trials(suburban_cfg)
