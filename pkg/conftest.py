# conftest.py
# Shared fixtures: builtin complexes parsed once per session and a seeded generator

import numpy as np
import pytest

from equilevel.config_manager import get_config
from equilevel.datasets import load_builtin


@pytest.fixture(scope="session")
def config():
    return get_config()


@pytest.fixture(scope="session")
def cd1(config):
    return load_builtin("CD1", config=config)


@pytest.fixture(scope="session")
def cd2(config):
    return load_builtin("CD2", config=config)


@pytest.fixture(scope="session")
def cd3(config):
    return load_builtin("CD3", "corrected", config)


@pytest.fixture(scope="session")
def cd3_formulas(config):
    return load_builtin("CD3", "formulas", config)


@pytest.fixture(scope="session")
def cd3_matrices(config):
    return load_builtin("CD3", "matrices", config)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
