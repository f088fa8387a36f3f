import pytest

from quivermod import QuiverPair, load_fixture


@pytest.fixture
def fig1():
    return load_fixture("fig1")


@pytest.fixture
def defn23():
    return load_fixture("defn23")[0]


def path3():
    return QuiverPair.from_edges(["p", "u", "q"], [("p", "u"), ("u", "q")], [1, 1, 1])


def kronecker(a=1, b=1):
    return QuiverPair.from_edges(["v1", "v2"], [("v1", "v2")] * 2, [a, b])


def k3(a=1, b=1):
    return QuiverPair.from_edges(["v1", "v2"], [("v1", "v2")] * 3, [a, b])
