import pytest

from pimsim.pulses import hermite_family


@pytest.fixture(scope="session")
def full_family():
    """Orders 0..3 on the full 127-sample grid (no truncation)."""
    return hermite_family(n=4, truncate_to=None)


@pytest.fixture(scope="session")
def trunc_family():
    """Orders 0..3 generated at 127 samples then center-truncated to 61."""
    return hermite_family(n=4)
