import pytest

from esspath import EssentialSpace, build_ade, space


@pytest.fixture(scope="session")
def a2():
    return build_ade("A", 2)


@pytest.fixture(scope="session")
def a3():
    return build_ade("A", 3)


@pytest.fixture(scope="session")
def a4():
    return build_ade("A", 4)


@pytest.fixture(scope="session")
def d4():
    return build_ade("D", 4)


@pytest.fixture(scope="session")
def e6():
    return build_ade("E", 6)


@pytest.fixture(scope="session")
def sp_a2(a2) -> EssentialSpace:
    return space(a2)


@pytest.fixture(scope="session")
def sp_a3(a3) -> EssentialSpace:
    return space(a3)


@pytest.fixture(scope="session")
def sp_d4(d4) -> EssentialSpace:
    return space(d4)


@pytest.fixture(scope="session")
def sp_e6(e6) -> EssentialSpace:
    return space(e6)
