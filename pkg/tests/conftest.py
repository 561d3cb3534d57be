import pytest

from joinlat import build, enumerate_subgroups, kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    kernels.warm_up()


_CACHE = {}


@pytest.fixture
def lattice_of():
    """Build-and-enumerate helper, cached across tests."""

    def get(spec: str):
        if spec not in _CACHE:
            g = build(spec)
            _CACHE[spec] = (g, enumerate_subgroups(g))
        return _CACHE[spec]

    return get
