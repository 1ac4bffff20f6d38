import pytest

from ..corpora import BUILTINS, builtin_dictionary


@pytest.fixture
def dictionary():
    return builtin_dictionary()


@pytest.fixture
def k30():
    return BUILTINS["K30"]


@pytest.fixture
def k16():
    return BUILTINS["K16"]


@pytest.fixture
def k6():
    return BUILTINS["K6"]


@pytest.fixture(params=sorted(BUILTINS))
def builtin(request):
    return BUILTINS[request.param]
