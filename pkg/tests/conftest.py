import pytest

from maxplus_bigo.samples import running_pair


@pytest.fixture
def running():
    return running_pair()
