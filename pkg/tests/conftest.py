import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from apsets import CUBE, Window, config, generate, integer_lattice

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def lattice_z():
    """Z intersected with the cube [-50, 50)."""
    return generate(integer_lattice(1, 50.0))


@pytest.fixture(scope="session")
def lattice_z2():
    """Z^2 intersected with [-20, 20)^2."""
    return generate(integer_lattice(2, 20.0))


@pytest.fixture(scope="session")
def union_sqrt2():
    """Z union sqrt(2) Z on [-100, 100)."""
    from apsets import standard_corpus

    return standard_corpus()["union_z_sqrt2"]


def random_config(rng, n, dim, halfwidth=2.0):
    w = Window(CUBE, np.zeros(dim), 2 * halfwidth)
    pts = rng.uniform(-halfwidth, halfwidth, size=(n, dim)) * 0.999
    return config(pts, w)
