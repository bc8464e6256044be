import pytest

from supertower.grothendieck import GrothLayer
from supertower.towers import build_nilcoxeter_tower, build_wreath_tower, clifford_base


@pytest.fixture(scope="session")
def nc6_10():
    """NilCoxeter tower, twist (1, 0), six levels; no Frobenius data."""
    return build_nilcoxeter_tower(6, 1, 0, frobenius_cap=0)


@pytest.fixture(scope="session")
def nc6_11():
    """NilCoxeter tower, twist (1, 1), six levels; no Frobenius data."""
    return build_nilcoxeter_tower(6, 1, 1, frobenius_cap=0)


@pytest.fixture(scope="session")
def nc4_11():
    """Small nilCoxeter tower with full Frobenius data and automorphisms."""
    return build_nilcoxeter_tower(4, 1, 1, frobenius_cap=4)


@pytest.fixture(scope="session")
def sergeev3():
    """Wreath tower over the rank-1 Clifford base, three levels."""
    return build_wreath_tower(clifford_base(), 3)


@pytest.fixture(scope="session")
def layer6_10(nc6_10):
    return GrothLayer(nc6_10)


@pytest.fixture(scope="session")
def layer6_11(nc6_11):
    return GrothLayer(nc6_11)


@pytest.fixture(scope="session")
def layer4_11(nc4_11):
    return GrothLayer(nc4_11)


@pytest.fixture(scope="session")
def sergeev_layer(sergeev3):
    return GrothLayer(sergeev3)
