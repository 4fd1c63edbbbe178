import pytest

from rspcover.tradeoff import baseline_table, build_table

GRID_MIN = 0.0025


@pytest.fixture(scope="session")
def spiral_table():
    """Exact covering radii of spiral_points(n) for n = 2..1024."""
    return build_table("spiral", 2, 1024)


@pytest.fixture(scope="session")
def grid_table():
    """Box-grid table grown until it covers r^2 = GRID_MIN."""
    return baseline_table(GRID_MIN)
