import pytest

from bridgemix.field_hash import make_params, zero_constant_params


@pytest.fixture(scope="session")
def fast_params():
    # Reduced-round instance for tests that grind through many hashes.
    return make_params(8)


@pytest.fixture(scope="session")
def tiny_params():
    return make_params(4)


@pytest.fixture(scope="session")
def zero1():
    return zero_constant_params(1)
