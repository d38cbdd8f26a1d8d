"""
Shared fixtures: generated catalog structures.
"""

import pytest

from core.catalog import gen_epr_bohm, gen_eps2d, gen_lattice, gen_lw1, gen_m2, gen_wrapped


@pytest.fixture
def epr():
    return gen_epr_bohm()


@pytest.fixture
def m2():
    return gen_m2()


@pytest.fixture
def lw1():
    return gen_lw1()


@pytest.fixture(scope="session")
def wrapped():
    return gen_wrapped()


@pytest.fixture
def eps2d():
    return gen_eps2d()


@pytest.fixture
def lattice():
    return gen_lattice()
