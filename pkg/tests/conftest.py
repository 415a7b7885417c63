import pytest

from mu2bounds import eulerprod


@pytest.fixture(scope="session")
def one_over_phi():
    return eulerprod.get_preset("one_over_phi")


@pytest.fixture(scope="session")
def one_over_p():
    return eulerprod.get_preset("one_over_p")


@pytest.fixture(scope="session")
def unit():
    return eulerprod.get_preset("unit")


# small limit for unit-level checks; acceptance drives the 1e7/1e8 runs
PL_SMALL = 10**5
PL_MED = 10**6
PL_DEFAULT = 10**7
