import pytest

from helpers import setup_for


@pytest.fixture
def get():
    return setup_for
