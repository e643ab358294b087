import pytest

from pgcodes import field_make, space_make


@pytest.fixture(scope="session")
def spaces():
    """Session-wide cache of projective spaces keyed by (n, p, h)."""
    cache = {}

    def get(n, p, h):
        key = (n, p, h)
        if key not in cache:
            cache[key] = space_make(n, field_make(p, h))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def fields():
    cache = {}

    def get(p, h):
        if (p, h) not in cache:
            cache[(p, h)] = field_make(p, h)
        return cache[(p, h)]

    return get
