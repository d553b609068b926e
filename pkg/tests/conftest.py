import pytest

from artifact import operad
from artifact.functorlab import SpanCat


@pytest.fixture(scope="session")
def com3():
    return operad.builtin("com", 3)


@pytest.fixture(scope="session")
def as3():
    return operad.builtin("as", 3)


@pytest.fixture(scope="session", params=["com", "as"])
def span_cat(request):
    """Free(P) with objects up to 4, enough for presentations with N = 3."""
    return SpanCat(operad.builtin(request.param, 4), 4)
