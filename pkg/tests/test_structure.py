import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from capelli.catalog import build_case, case_data
from capelli.exact import LinearForm, Polynomial, Weight, rat
from capelli.structure import (
    GroupElement, NotAReflection, check_axioms, classify_rho, close_group, extract_roots, orbit,
    poly_to_ambient, reflection_root, weight_to_ambient,
)

from conftest import DESK_PARAMS, desk


def test_group_orders():
    assert len(close_group([GroupElement(((0, 1), (1, 0)))])) == 2
    assert len(desk("VIa").group) == 4
    assert close_group([], rank_hint=2) == [GroupElement.identity(2)]


def test_case_I_roots(i2):
    (d,) = i2.delta_plus
    # z1 - z2 is the first element of Sigma; its coroot is e1 - e2 in ambient terms
    assert d.root == LinearForm((1, 0))
    assert weight_to_ambient(i2, d.coroot) == (1, -1)
    assert extract_roots([GroupElement.identity(2)]) == []


def test_case_VIa_roots_are_primitive():
    s = desk("VIa")
    for d in s.delta_plus:
        assert d.root.is_integral()
        g = 0
        for c in d.root.ints():
            g = abs(c) if g == 0 else __import__("math").gcd(g, abs(c))
        assert g == 1
        assert d.root(d.coroot) == 2


def test_orbits(i2):
    z2 = LinearForm((0, 1))
    assert {f.coords for f in orbit(i2.group, z2)} == {(0, 1), (1, 1)}  # z2 and z1 = (z1 - z2) + z2
    inv = LinearForm((1, 2))
    assert orbit(i2.group, inv) == [inv]
    a = LinearForm((1, 0))
    assert {f.coords for f in orbit(i2.group, a, with_negation=True)} == {(1, 0), (-1, 0)}


def test_classify_rho_examples():
    c = classify_rho(build_case("I", {"n": 2}, {"r": 1, "s": "1/2"}))
    assert (c.regular, c.dominant, c.strongly_dominant, c.non_integral) == (True, True, True, False)
    c = classify_rho(build_case("I", {"n": 2}, {"r": "5/7", "s": "3/11"}))
    assert (c.regular, c.dominant, c.strongly_dominant, c.non_integral) == (True, True, True, True)


@pytest.mark.parametrize("case_id,size", [("I", {"n": 3}), ("II", {"n": 3}), ("III", {"n": 3}),
                                          ("IVc", {}), ("VIa", {}), ("VIb", {})])
def test_constant_k_one_third_is_strongly_dominant(case_id, size):
    names = {lab.lstrip("±-+") for lab in case_data(case_id, size).labels}
    s = build_case(case_id, size, {nm: "1/3" for nm in names})
    assert classify_rho(s).strongly_dominant


def test_axioms_case_I(i2):
    rep = check_axioms(i2, 3)
    assert rep.passed
    assert list(rep.results)[-1] == "C0"


def test_zero_ell_breaks_C3_prime(i2):
    broken = dataclasses.replace(i2, ell=LinearForm((0, 0)), cache={})
    rep = check_axioms(broken, 1)
    assert not rep.results["C3'"].passed


def test_non_reflection_rejected():
    with pytest.raises(NotAReflection):
        reflection_root(GroupElement(((-1, 0), (0, -1))))


@pytest.mark.parametrize("case_id,size,kind", DESK_PARAMS)
def test_ell_invariant_and_positive_on_sigma_check(case_id, size, kind):
    s = desk(case_id, size, kind)
    ell = s.ell_poly()
    assert s.is_invariant(ell)
    assert all(s.ell(w) == 1 for w in s.sigma1_check)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_group_action_is_an_action(data):
    s = desk("VIb")
    g = data.draw(st.sampled_from(s.group))
    h = data.draw(st.sampled_from(s.group))
    w = Weight(tuple(data.draw(st.integers(-3, 3)) for _ in range(s.rank)))
    gh = next(x for x in s.group if x.matrix == tuple(
        tuple(sum(g.matrix[i][k] * h.matrix[k][j] for k in range(s.rank)) for j in range(s.rank))
        for i in range(s.rank)))
    assert gh.act_weight(w) == g.act_weight(h.act_weight(w))
    f = LinearForm(tuple(data.draw(st.integers(-3, 3)) for _ in range(s.rank)))
    assert g.act_form(f)(g.act_weight(w)) == f(w)


def test_poly_to_ambient_case_I(i2):
    ell = poly_to_ambient(i2, i2.ell_poly())
    assert ell == Polynomial(2, {(1, 0): 1, (0, 1): 1})
