import pytest
from hypothesis import given, settings, strategies as st

from capelli.catalog import build_case
from capelli.diffop import minus
from capelli.exact import Polynomial, UndefinedValue, Weight, rat
from capelli.interp import UndefinedNormalizer, interpolate_p, invariant_basis
from capelli.lattice import enumerate_lambda, enumerate_lambda_plus, in_lambda
from capelli.pieri import (
    PieriTable, b_value_positive, dual_identity_sides, pequation, pieri_alternating, pieri_direct,
    pieri_path_formula, requires_non_integral, virtual_dimension, virtual_dimension_half_integral,
    virtual_dimension_product,
)

from conftest import desk

CASES = [("I", {"n": 2}), ("I", {"n": 3}), ("II", {"n": 3}), ("III", {"n": 3}), ("VIa", {}),
         ("VIb", {}), ("V", {"a": 2, "b": 1})]


def W(*c):
    return Weight(c)


def test_pieri_examples(i2):
    p1 = interpolate_p(i2, W(1, 0)).poly
    t = pieri_direct(i2, p1, W(0, 0))
    assert t.coeffs == {W(1, 0): 1}
    assert t.coefficient(W(0, 0)) == 0
    t = pieri_direct(i2, p1, W(1, 0))
    assert t.coefficient(W(0, 0)) == 1
    assert set(t.coeffs) <= {W(0, 0), W(1, 0), W(-1, 1)}
    c = Polynomial.constant(rat("5/3"), 2)
    assert pieri_direct(i2, c, W(0, 1)).coeffs == {W(0, 0): rat("5/3")}


def test_path_formula_examples(i2):
    h = interpolate_p(i2, W(0, 1)).poly
    mu = W(1, 0)
    assert pieri_path_formula(i2, h, mu, W(0, 0)) == h.evaluate((i2.rho + mu).coords)
    c = Polynomial.constant(3, 2)
    assert pieri_path_formula(i2, c, mu, W(1, 0)) == 0
    ell = i2.ell_poly() - 2
    assert pieri_alternating(i2, ell, W(0, 0), W(1, 0)) == 1
    assert pieri_alternating(i2, h, mu, W(0, 0)) == h.evaluate((i2.rho + mu).coords)


def test_square_of_p_e1(i2):
    # p_e1 = ell - 2, and (x)^2 = 2 C(x, 2) + x with C(ell - 2, 2) = p_(2,0) + p_(0,1)
    t = pieri_direct(i2, interpolate_p(i2, W(1, 0)).poly, W(1, 0))
    assert t.coeffs == {W(1, 0): 2, W(-1, 1): 2, W(0, 0): 1}
    doc = t.to_json()
    assert doc["mu"] == [1, 0]
    assert [c["a"] for c in doc["coeffs"]] == ["2", "1", "2"]


@pytest.mark.parametrize("case_id,size", CASES)
@pytest.mark.parametrize("kind", ["geo", "gen"])
def test_three_routes_agree(case_id, size, kind):
    s = desk(case_id, size, kind)
    h = invariant_basis(s, 2).elements[-1]
    for mu in enumerate_lambda_plus(s, 1):
        table = pieri_direct(s, h, mu)
        assert all(in_lambda(s, t) for t in table.coeffs)
        for tau in enumerate_lambda(s, 2):
            if not (mu + tau).is_dominant_lattice():
                continue
            a = table.coefficient(tau)
            assert pieri_path_formula(s, h, mu, tau) == a
            assert pieri_alternating(s, h, mu, tau) == a
            assert pieri_alternating(s, h, mu, tau, values="paths") == a


def test_virtual_dimension_case_I_closed_form():
    for k in ({"r": 1, "s": "1/2"}, {"r": "1/3", "s": "1/5"}, {"r": "2/7", "s": "5/3"}):
        s = build_case("I", {"n": 2}, k)
        r, sp = s.k_values["r"], s.k_values["s"]
        assert virtual_dimension(s, W(0, 0)) == 1
        assert virtual_dimension(s, W(1, 0)) == 2 * (r + 2 * sp)
    assert virtual_dimension(build_case("I", {"n": 2}, {"r": 1, "s": "1/2"}), W(1, 0)) == 4


def test_virtual_dimension_matches_matrix_space_modules(i2):
    # 2x2 matrices under GL2 x GL2: the degree component with highest weight (a + b, b)
    # is V (x) V* with dim V = a + 1
    for lam in enumerate_lambda_plus(i2, 5):
        a, b = lam.ints()
        assert virtual_dimension(i2, lam) == (a + 1) ** 2


@pytest.mark.parametrize("case_id,size", CASES)
@pytest.mark.parametrize("kind", ["geo", "gen"])
def test_dimension_forms_and_duality(case_id, size, kind):
    s = desk(case_id, size, kind)
    pts = enumerate_lambda_plus(s, 3)
    for lam in pts:
        d = virtual_dimension(s, lam)
        assert d == virtual_dimension_product(s, lam)
        if kind == "geo":
            assert d == virtual_dimension_half_integral(s, lam)
            assert d.denominator == 1 and d > 0
        for mu in pts:
            if in_lambda(s, lam - mu):
                left, right = dual_identity_sides(s, lam, mu)
                assert left == right


def test_half_integral_form_rejects_generic():
    s = desk("I", {"n": 2}, "gen")
    with pytest.raises(ValueError):
        virtual_dimension_half_integral(s, W(1, 0))


@pytest.mark.parametrize("case_id,size", CASES)
def test_pequation_generic(case_id, size):
    s = desk(case_id, size, "gen")
    assert not requires_non_integral(s)
    for lam in enumerate_lambda_plus(s, 2)[1:]:
        h = interpolate_p(s, lam).poly
        for mu in enumerate_lambda_plus(s, 1):
            for tau in enumerate_lambda(s, 2):
                if not (mu + tau).is_dominant_lattice():
                    continue
                for route in ("symbolic", "positive"):
                    assert pequation(s, h, mu, tau, route).holds


@pytest.mark.parametrize("case_id,size", CASES)
def test_pequation_positive_route_geometric(case_id, size):
    s = desk(case_id, size, "geo")
    assert requires_non_integral(s)
    h = interpolate_p(s, enumerate_lambda_plus(s, 2)[-1]).poly
    for mu in enumerate_lambda_plus(s, 1):
        for tau in enumerate_lambda(s, 2):
            if (mu + tau).is_dominant_lattice():
                assert pequation(s, h, mu, tau, "positive").holds


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CASES), st.data())
def test_pieri_expansion_reconstructs_product(case, data):
    s = desk(*case, "gen")
    h = data.draw(st.sampled_from(list(invariant_basis(s, 2))))
    mu = data.draw(st.sampled_from(enumerate_lambda_plus(s, 2)))
    t = pieri_direct(s, h, mu)
    total = Polynomial.zero(s.rank)
    for tau, a in t.coeffs.items():
        total = total + interpolate_p(s, mu + tau).poly.scale(a)
    assert total == h * interpolate_p(s, mu).poly
    assert t.coefficient(W(*([0] * s.rank))) == h.evaluate((s.rho + mu).coords)


def test_pieri_rejects_non_dominant(i2):
    with pytest.raises(ValueError):
        pieri_direct(i2, i2.ell_poly(), W(-1, 1))
