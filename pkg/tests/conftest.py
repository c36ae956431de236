import pytest

from braidfoq import Field
from braidfoq.suite import fixture_e0, fixture_e1, fixture_e2


@pytest.fixture(scope="session")
def f8():
    return Field.cyclotomic(8)


@pytest.fixture(scope="session")
def e0():
    return fixture_e0()


@pytest.fixture(scope="session")
def e1():
    return fixture_e1()


@pytest.fixture(scope="session")
def e2():
    return fixture_e2()
