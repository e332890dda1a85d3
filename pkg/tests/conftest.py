import pytest

from henonlab import scenes


@pytest.fixture(scope="session")
def two_gen():
    return scenes.two_gen().gs


@pytest.fixture(scope="session")
def three_gen():
    return scenes.three_gen().gs


@pytest.fixture(scope="session")
def single_classical():
    return scenes.single_classical().gs


@pytest.fixture(scope="session")
def attracting_pair():
    return scenes.attracting_pair().gs
