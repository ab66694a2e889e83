import numpy as np
import pytest
from hypothesis import settings

from focklab import MacroscopicPotential

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")


@pytest.fixture
def ginibre():
    """Q = r^2, c = 0: every closed form is elementary."""
    return MacroscopicPotential(kind="radial", c=0.0, radial_coeffs={1: 1.0})


def radial_potential(k: int, c: float, a: float = 1.0) -> MacroscopicPotential:
    return MacroscopicPotential(kind="radial", c=c, radial_coeffs={k: a})


@pytest.fixture
def z_grid():
    return np.linspace(0.1, 2.0, 20)
