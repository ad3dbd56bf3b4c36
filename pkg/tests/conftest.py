import numpy as np
import pytest

from quditdiscord import lie_algebra as la


@pytest.fixture(scope="session")
def basis3():
    return la.build_basis(3)


@pytest.fixture(scope="session")
def basis4():
    return la.build_basis(4)


@pytest.fixture(scope="session")
def tensors3(basis3):
    return la.structure_tensors(basis3)


def random_hermitian(d, rng):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (m + m.conj().T) / 2.0


def random_density(d, rng):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho)
