import pytest
import yaml

from capelli.catalog import (
    CASE_IDS, DESK_CASES, InvalidCaseParams, build_case, find_isomorphism, generic_params,
    geometric_params, list_cases, load_structure_file, parse_k, structure_from_document,
)
from capelli.exact import rat
from capelli.structure import classify_rho, weight_to_ambient

from conftest import desk

I2_DOC = {
    "name": "I2-file",
    "ambient_dim": 2,
    "sigma": [[1, -1], [0, 1]],
    "sigma_check": [[1, 0], [1, 1]],
    "ell": [1, 1],
    "generators": [[[0, 1], [1, 0]]],
    "labels": ["±r", "s"],
    "k": {"r": 1, "s": "1/2"},
    "delta_plus": [[1, -1]],
    "phi_plus": [[1, -1], [1, 0], [0, 1]],
}


def test_list_cases():
    rows = list_cases()
    assert len(rows) == 9
    assert [r["case"] for r in rows] == list(CASE_IDS)


def test_case_I_n2(i2):
    assert i2.rank == 2
    assert sorted(weight_to_ambient(i2, w) for w in i2.lambda1) == [(0, 1), (1, 0)]
    assert len(i2.phi_plus) == 3
    assert weight_to_ambient(i2, i2.rho) == (rat("3/2"), rat("1/2"))
    assert i2.labels == ("±r", "s")


def test_case_VIa():
    s = build_case("VIa", {}, {"r": "1/2", "s": 1, "t": 1})
    assert s.rank == 3
    assert tuple(s.ambient["ell"]) == (2, 0, 0)
    assert weight_to_ambient(s, s.rho) == (2, rat("3/2"), rat("1/2"))


def test_case_V_size_constraint():
    with pytest.raises(InvalidCaseParams):
        build_case("V", {"a": 1, "b": 2}, {})


def test_unknown_case_and_parameter():
    with pytest.raises(InvalidCaseParams):
        build_case("VII", {}, {})
    with pytest.raises(InvalidCaseParams):
        build_case("I", {"n": 2}, {"r": 1, "s": 1, "q": 1})


def test_case_V_equal_sizes_needs_explicit_parameters():
    with pytest.raises(InvalidCaseParams):
        build_case("V", {"a": 2, "b": 2}, {})


def test_parse_k():
    assert parse_k("r=1,s=1/2") == {"r": 1, "s": rat("1/2")}
    assert parse_k("") == {}


def test_V21_isomorphic_to_II4():
    v = desk("V", {"a": 2, "b": 1})
    ii = build_case("II", {"n": 4}, {"r": "1/2", "s": "1/2"})
    p = find_isomorphism(v, ii)
    assert p is not None
    assert sorted(p) == list(range(v.rank))
    assert find_isomorphism(v, desk("I", {"n": 3})) is None


@pytest.mark.parametrize("case_id,size", DESK_CASES)
def test_generic_params_are_non_integral(case_id, size):
    s = build_case(case_id, size, generic_params(case_id, size))
    c = classify_rho(s)
    assert c.strongly_dominant and c.non_integral


@pytest.mark.parametrize("case_id,size", DESK_CASES)
def test_geometric_params_are_strongly_dominant(case_id, size):
    s = build_case(case_id, size, geometric_params(case_id, size))
    assert classify_rho(s).strongly_dominant


def test_structure_file_roundtrip(tmp_path, i2):
    path = tmp_path / "i2.yaml"
    path.write_text(yaml.safe_dump(I2_DOC, allow_unicode=True))
    s = load_structure_file(path)
    assert s.rank == i2.rank and s.rho == i2.rho and s.ell == i2.ell
    assert len(s.group) == 2


def test_structure_file_derived_labels():
    doc = {k: v for k, v in I2_DOC.items() if k not in ("labels", "k")}
    doc["k"] = {"o1": 1, "o2": "1/2"}
    s = structure_from_document(doc, "no-labels")
    assert s.rho == desk("I", {"n": 2}).rho


def test_structure_file_inconsistent_tables():
    doc = dict(I2_DOC, phi_plus=[[1, -1], [1, 0]])
    with pytest.raises(Exception):
        structure_from_document(doc, "bad")
    doc = dict(I2_DOC, rho_params={"r": 2, "s": "1/2"})
    with pytest.raises(Exception):
        structure_from_document(doc, "bad")
