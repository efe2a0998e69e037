import pytest

from cqnc.params import preset


@pytest.fixture
def fig2():
    return preset("fig2").params


@pytest.fixture
def fig3():
    return preset("fig3").params
