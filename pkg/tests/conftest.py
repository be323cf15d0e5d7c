import pytest

from crql.opmatrix import build_ql


@pytest.fixture(scope="session")
def ql_by_n():
    """Assembled Q_L matrices shared across the suite (pure values)."""
    return {n: build_ql(n) for n in (1, 2, 3)}
