import numpy as np
import pytest

from genhelix.config import DEFAULT
from genhelix.cylinderlab import generate_normal_helix, make_cylinder

THETA = np.pi / 36


@pytest.fixture(scope="session")
def config():
    return DEFAULT


@pytest.fixture(scope="session")
def unit_cylinder(config):
    return make_cylinder(config=config)


@pytest.fixture(scope="session")
def normal_helix(config, unit_cylinder):
    """Normal helix with angle pi/36 on the unit cylinder, aligned with the closed form."""
    return generate_normal_helix(unit_cylinder, THETA, 0.0, 1.0 / np.tan(THETA), 0.0, (-10.0, 10.0), config=config)


@pytest.fixture(scope="session")
def normal_frenet(config, normal_helix):
    return normal_helix.frenet(config)
