import numpy as np
import pytest

from sled_oam import AnnulusGeometry, KQuadrature, gaas_nb_junction


@pytest.fixture(scope="session")
def junction():
    return gaas_nb_junction()


@pytest.fixture(scope="session")
def geometry():
    return AnnulusGeometry.default()


@pytest.fixture(scope="session")
def fast_quad():
    """Coarse momentum grid for tests that probe structure, not precision."""
    return KQuadrature(nodes=256)


@pytest.fixture()
def rng():
    return np.random.default_rng(20250810)
