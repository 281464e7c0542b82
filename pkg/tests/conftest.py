import pytest
from hypothesis import settings

from lattice_skein import oracle, poset
from lattice_skein.catalan import floor_returns

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def asym_state():
    return poset.state_of((3, 4, 4, 3), 4)


def cat_f_states(max_m, max_n, cap=5000):
    """Every floor-return-free state reached by a staircase sequence."""
    out = []
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            if (n + 1) ** m > cap:
                continue
            out += [c for c in oracle.restricted_expansion(m, n) if not floor_returns(c)]
    return out


@pytest.fixture(scope="session")
def cat_f_33():
    return cat_f_states(3, 3)
