import pytest

from troprec.src.core import parse_vector
from troprec.src.oracle import OracleConfig


CATALOGUE = ["0,0", "0,0,0", "0,1,0", "0,2,0", "0,1,2,0", "0,1,3,0"]


@pytest.fixture
def catalogue():
    """Vectors with known behaviour used across the suites."""
    return {text: parse_vector(text) for text in CATALOGUE}


@pytest.fixture
def all_zero():
    """a = (0, 0, 0): three points on one edge."""
    return parse_vector("0,0,0")


@pytest.fixture
def period_two():
    """a = (0, 1, 0): every minimal sequence has period 2."""
    return parse_vector("0,1,0")


@pytest.fixture
def constant_only():
    """a = (0, 0): regular, only constant sequences."""
    return parse_vector("0,0")


@pytest.fixture
def degree_three_branching():
    """a = (0, 1, 3, 0): c > 2b, non-periodic minimal sequences exist."""
    return parse_vector("0,1,3,0")


@pytest.fixture
def gapped_support():
    """a = (0, 0, inf, 0): the zero set {0, 1, 3} is not a progression."""
    return parse_vector("0,0,inf,0")


@pytest.fixture
def oracle_config():
    """Oracle budget large enough for the small catalogue instances."""
    return OracleConfig(max_enumeration=500_000, random_seed=7)
