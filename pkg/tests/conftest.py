import pytest

from dirac1d.core import PhysicalParams, PotentialParams


@pytest.fixture
def natural():
    return PhysicalParams()


@pytest.fixture
def pot_a():
    return PotentialParams(1.0, 1.0)


@pytest.fixture
def pot_b():
    return PotentialParams(-1.0, -1.0)
