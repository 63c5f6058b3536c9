import pytest

from elldiv import WeierstrassCurve, canonical_height

# Limit-definition values, frozen from the doubling table at N = 10..11 and
# cross-checked against h(nP)/(2n^2) for n = 20..30 (both agree to ~2e-4).
HHAT_37A = 0.0255557040771
HHAT_65A = 0.1877570117274


@pytest.fixture(scope="session")
def e37():
    return WeierstrassCurve(0, 0, 1, -1, 0)


@pytest.fixture(scope="session")
def p37(e37):
    return e37.point(0, 0)


@pytest.fixture(scope="session")
def e65():
    return WeierstrassCurve(1, 0, 0, -1, 0)


@pytest.fixture(scope="session")
def p65(e65):
    return e65.point(1, 0)


@pytest.fixture(scope="session")
def q65(e65):
    return e65.point(0, 0)


@pytest.fixture(scope="session")
def hhat37_estimate(p37):
    return canonical_height(p37, 1e-6)


@pytest.fixture(scope="session")
def hhat65_estimate(p65):
    return canonical_height(p65, 1e-6)
