import pytest

from riscov.analytics import QuadratureSpec
from riscov.config import NetworkConfig


@pytest.fixture(scope="session")
def cfg():
    return NetworkConfig()


@pytest.fixture(scope="session")
def light_quad():
    # trimmed node counts for tests that only probe qualitative structure
    return QuadratureSpec(q1=12, q2=12, q3=8)
