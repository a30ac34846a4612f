import pytest

from groups.presentations import free_presentation, surface_presentation
from groups.words import MarkedAlphabet
from schreier.core import stallings_core


@pytest.fixture
def ab():
    return MarkedAlphabet.of("a", "b")


@pytest.fixture
def w(ab):
    return ab.word


@pytest.fixture
def f2():
    return free_presentation(2)


@pytest.fixture
def surface():
    return surface_presentation(2)


@pytest.fixture
def core_of(ab):
    def build(*gens):
        return stallings_core(ab, [ab.word(g) for g in gens])

    return build
