import pytest

from securepix.config import RunConfig
from securepix.fefet import FeDeviceParams
from securepix.pixel import PixelParams
from securepix.variation import VariationSpec


@pytest.fixture(scope="session")
def run_cfg() -> RunConfig:
    return RunConfig.defaults()


@pytest.fixture(scope="session")
def fe_params() -> FeDeviceParams:
    return FeDeviceParams()


@pytest.fixture(scope="session")
def pixel_params() -> PixelParams:
    return PixelParams()


@pytest.fixture(scope="session")
def variation_spec() -> VariationSpec:
    return VariationSpec()
