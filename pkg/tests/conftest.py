import pytest

from agpolar.curve import hermitian_curve, rational_curve
from agpolar.galois import field_new
from agpolar.kernel import arikan_kernel, build_kernel


@pytest.fixture(scope="session")
def gf2():
    return field_new(2, 1)


@pytest.fixture(scope="session")
def gf4():
    return field_new(2, 2)


@pytest.fixture(scope="session")
def herm4(gf4):
    return hermitian_curve(gf4)


@pytest.fixture(scope="session")
def rat4(gf4):
    return rational_curve(gf4)


@pytest.fixture(scope="session")
def kh(herm4):
    return build_kernel(herm4)


@pytest.fixture(scope="session")
def kr(rat4):
    return build_kernel(rat4)


@pytest.fixture(scope="session")
def ka(gf2):
    return arikan_kernel(gf2)
