import importlib.util
from pathlib import Path

import pytest

from recur2code.gf import build_field, parse_element
from recur2code.recurrence import RecurrenceParams

ROOT = Path(__file__).resolve().parents[1]

# the exhaustive range used throughout the acceptance criteria
SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27]


@pytest.fixture(scope="session")
def F3():
    return build_field(3, 1)


@pytest.fixture(scope="session")
def F5():
    return build_field(5, 1)


@pytest.fixture(scope="session")
def F9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def conway_search():
    """The standalone Conway-polynomial search in scripts/, loaded as a module."""
    spec = importlib.util.spec_from_file_location("gen_conway", ROOT / "scripts" / "gen_conway.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def params(field, a, b):
    return RecurrenceParams(parse_element(field, a), parse_element(field, b))
