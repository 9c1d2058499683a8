"""Session-wide fixtures.

Building the order complexes is the expensive part of the suite, so a
single cached factory hands out each (d, n) complex at most once per
session.
"""

import pytest

from barvinok2.homology import simplicial_chain_complex
from barvinok2.tree_complex import build_complex, build_unquotiented


@pytest.fixture(scope="session")
def built():
    cache = {}

    def get(d, n, quotient=True):
        key = (d, n, bool(quotient))
        if key not in cache:
            maker = build_complex if quotient else build_unquotiented
            cache[key] = maker(d, n)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def chain_of(built):
    """Cached chain complex of the quotiented (d, n) order complex."""
    cache = {}

    def get(d, n):
        if (d, n) not in cache:
            cache[(d, n)] = simplicial_chain_complex(built(d, n).simplices_by_dim)
        return cache[(d, n)]

    return get
