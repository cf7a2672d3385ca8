import pytest

from qx.expr import Context


@pytest.fixture
def ctx():
    return Context()
