import numpy as np
import pytest

from helpers import example_map, load_spec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def map3():
    return example_map()


@pytest.fixture
def chain5():
    return load_spec("chain5")


@pytest.fixture
def tworoots():
    return load_spec("tworoots")


@pytest.fixture
def robust5():
    return load_spec("robust5")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
