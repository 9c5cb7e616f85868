import numpy as np
import pytest

from shocklab.euler import GasModel
from shocklab.mesh import generate_grid


@pytest.fixture(scope="session")
def gas():
    return GasModel(1.4)


@pytest.fixture(scope="session")
def quad_grid():
    return generate_grid("quad", 8, 16, 1.0, 4.0)


@pytest.fixture(scope="session")
def tri_grid():
    return generate_grid("regular_tri", 8, 16, 1.0, 4.0)


@pytest.fixture(scope="session")
def irr_grid():
    return generate_grid("irregular_tri", 8, 16, 1.0, 4.0, seed=5)


def random_states(rng, n, vmax=3.0):
    """Valid random primitive states (rho, u, v, p)."""
    return np.column_stack([
        rng.uniform(0.1, 5.0, n),
        rng.uniform(-vmax, vmax, n),
        rng.uniform(-vmax, vmax, n),
        rng.uniform(0.1, 5.0, n),
    ])


def random_normals(rng, n):
    t = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.cos(t), np.sin(t)
