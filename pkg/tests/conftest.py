import functools

import pytest

from capelli.catalog import DESK_CASES, build_case, generic_params, geometric_params


@functools.lru_cache(maxsize=None)
def _structure(case_id, size_items, kind):
    size = dict(size_items)
    params = geometric_params(case_id, size) if kind == "geo" else generic_params(case_id, size)
    return build_case(case_id, size, params)


def desk(case_id, size=None, kind="geo"):
    return _structure(case_id, tuple(sorted((size or {}).items())), kind)


def case_label(case_id, size):
    return case_id + "".join(f"-{k}{v}" for k, v in sorted(size.items()))


DESK_PARAMS = [
    pytest.param(cid, size, kind, id=f"{case_label(cid, size)}-{kind}")
    for cid, size in DESK_CASES for kind in ("geo", "gen")
]


@pytest.fixture
def i2():
    return build_case("I", {"n": 2}, {"r": 1, "s": "1/2"})
