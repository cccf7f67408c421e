import pytest

from qdc.algebra import QuantumGroup, load_rmatrix
from qdc.calculus import assemble, DEFAULT_RMATRIX


@pytest.fixture(scope="session")
def calc():
    return assemble()


@pytest.fixture(scope="session")
def qg(calc):
    return calc.qg


@pytest.fixture(scope="session")
def dual(calc):
    return calc.dual


@pytest.fixture(scope="session")
def qg_gl():
    return QuantumGroup(load_rmatrix(DEFAULT_RMATRIX), sl_mode=False)
