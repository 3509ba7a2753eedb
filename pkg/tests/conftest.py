import pytest

from species_crystal import presets
from species_crystal.reps import simple_module


@pytest.fixture(scope="session")
def c2():
    return presets.load("c2")


@pytest.fixture(scope="session")
def c2_simples(c2):
    return simple_module(c2, 0), simple_module(c2, 1)
