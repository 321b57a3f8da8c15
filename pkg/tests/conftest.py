import pytest
from hypothesis import HealthCheck, settings

from zerosums import config

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("ci")


@pytest.fixture(autouse=True)
def verification_mode():
    """Run both unique-factorization algorithms and compare, in every test."""
    old = config.VERIFICATION_MODE
    config.VERIFICATION_MODE = True
    yield
    config.VERIFICATION_MODE = old
