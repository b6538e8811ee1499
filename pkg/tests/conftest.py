import pytest

import ccl


@pytest.fixture(scope="session")
def built():
    """Cache of (RootSystem, Group) pairs, built once per session."""
    cache = {}

    def get(spec: str):
        if spec not in cache:
            t = ccl.GroupType.parse(spec)
            rs = ccl.build(t, enable_h4=(t.family == "H4"))
            cache[spec] = (rs, ccl.enumerate_group(rs))
        return cache[spec]

    return get
