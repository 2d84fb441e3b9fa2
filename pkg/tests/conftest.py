import pytest

from qobeam.params import MacParams, TimingParams, slot_durations


@pytest.fixture(scope="session")
def mac():
    return MacParams(w0=8, m=3, h=5)


@pytest.fixture(scope="session")
def timing():
    return TimingParams()


@pytest.fixture(scope="session")
def slots(timing):
    return slot_durations(timing)
