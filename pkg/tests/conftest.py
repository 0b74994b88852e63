import pytest

from lmarray import AntennaZMatrix, BasisConfig, reference_fixture


@pytest.fixture
def zm() -> AntennaZMatrix:
    return reference_fixture()


@pytest.fixture
def cfg() -> BasisConfig:
    return BasisConfig()
