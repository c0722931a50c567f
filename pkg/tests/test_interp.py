from itertools import combinations_with_replacement, permutations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from capelli.catalog import build_case
from capelli.exact import Polynomial, Weight, binomial_poly, rat
from capelli.interp import (
    binomial_identity_sides, ell_pieri_polynomials, ell_pieri_values, expand_in_basis,
    interpolate_p, invariant_basis, invariant_dimension, normalize_P, p_value_by_paths, resum,
)
from capelli.lattice import enumerate_lambda_plus, in_lambda
from capelli.structure import poly_to_ambient, weight_to_ambient

from conftest import desk

CASES = [("I", {"n": 2}), ("I", {"n": 3}), ("II", {"n": 3}), ("III", {"n": 3}), ("VIa", {}),
         ("V", {"a": 2, "b": 1})]


def W(*c):
    return Weight(c)


def z_poly(n, exprs):
    """sympy polynomial in z1..zn -> capelli Polynomial in n variables."""
    zs = sympy.symbols(f"z1:{n + 1}")
    out = {}
    for monom, c in sympy.Poly(exprs, *zs).terms():
        out[monom] = rat(f"{c.p}/{c.q}")
    return Polynomial(n, out)


def symmetric_oracle(s, lam, n):
    """p_lambda for Case I in ambient coordinates, by a sympy solve over monomial
    symmetric polynomials."""
    zs = sympy.symbols(f"z1:{n + 1}")
    d = int(s.ell(lam))
    basis = []
    for k in range(d + 1):
        for part in {tuple(sorted(c, reverse=True)) for c in combinations_with_replacement(range(k + 1), n)
                     if sum(c) == k}:
            basis.append(sum({sympy.prod([z ** e for z, e in zip(zs, perm)]) for perm in permutations(part)}))
    pts = enumerate_lambda_plus(s, d)
    assert len(pts) == len(basis)
    rows, rhs = [], []
    for mu in pts:
        amb = [sympy.Rational(int(x.numerator), int(x.denominator)) for x in weight_to_ambient(s, s.rho + mu)]
        rows.append([b.subs(dict(zip(zs, amb))) for b in basis])
        rhs.append(1 if mu == lam else 0)
    coef = sympy.Matrix(rows).LUsolve(sympy.Matrix(rhs))
    return z_poly(n, sympy.expand(sum(c * b for c, b in zip(coef, basis))))


def test_invariant_basis_case_I(i2):
    b = invariant_basis(i2, 2)
    assert len(b) == 4
    assert invariant_dimension(i2, 0) == 1
    for p in b:
        assert i2.is_invariant(p)


def test_p_zero_is_one(i2):
    assert interpolate_p(i2, W(0, 0)).poly == Polynomial.constant(1, 2)


def test_p_e1_case_I(i2):
    amb = poly_to_ambient(i2, interpolate_p(i2, W(1, 0)).poly)
    assert amb == Polynomial(2, {(1, 0): 1, (0, 1): 1, (0, 0): -2})


def test_p_e1_plus_e2_values(i2):
    p = interpolate_p(i2, W(0, 1))
    assert p.ell == 2
    vals = [p(i2.rho + mu) for mu in (W(0, 0), W(1, 0), W(2, 0), W(0, 1))]
    assert vals == [0, 0, 0, 1]


@pytest.mark.parametrize("n,k", [(2, {"r": 1, "s": "1/2"}), (2, {"r": "1/3", "s": "1/5"}),
                                 (3, {"r": "1/3", "s": "1/5"})])
def test_case_I_against_symmetric_function_oracle(n, k):
    s = build_case("I", {"n": n}, k)
    for lam in enumerate_lambda_plus(s, 3):
        assert poly_to_ambient(s, interpolate_p(s, lam).poly) == symmetric_oracle(s, lam, n)


def test_paths_values_case_I(i2):
    assert p_value_by_paths(i2, W(1, 0), W(1, 0)) == 1
    assert p_value_by_paths(i2, W(1, 0), W(0, 1)) == 2
    assert p_value_by_paths(i2, W(0, 1), W(2, 0)) == 0
    assert interpolate_p(i2, W(1, 0))(i2.rho + W(0, 1)) == 2


def test_normalize_P_case_I(i2):
    assert normalize_P(i2, W(0, 0)) == Polynomial.constant(1, 2)
    assert normalize_P(i2, W(1, 0)) == interpolate_p(i2, W(1, 0)).poly


def test_expand_examples(i2):
    p1 = interpolate_p(i2, W(1, 0)).poly
    assert expand_in_basis(i2, p1, "p", 1) == {W(1, 0): 1}
    g = binomial_poly(i2.ell_poly() - 2, 2)
    assert expand_in_basis(i2, g, "p", 2) == {W(2, 0): 1, W(0, 1): 1}
    P1 = normalize_P(i2, W(1, 0))
    c = expand_in_basis(i2, P1 * P1, "P", 2)
    assert c[W(2, 0)] == 1
    assert all(nu == W(2, 0) or i2.ell(nu) < 2 or nu == W(0, 1) for nu in c)


@pytest.mark.parametrize("case_id,size", CASES)
@pytest.mark.parametrize("basis", ["p", "P", "e"])
def test_expand_then_resum(case_id, size, basis):
    s = desk(case_id, size, "gen")
    g = invariant_basis(s, 2).elements[-1] * s.ell_poly()
    assert resum(s, expand_in_basis(s, g, basis, 3), basis) == g


@pytest.mark.parametrize("case_id,size", CASES)
def test_binomial_and_ell_pieri(case_id, size):
    s = desk(case_id, size, "gen")
    for k in range(3):
        left, right = binomial_identity_sides(s, k)
        assert left == right
    for lam in enumerate_lambda_plus(s, 1):
        left, right = ell_pieri_polynomials(s, lam, 2)
        assert left == right
        for mu in enumerate_lambda_plus(s, 3):
            a, b = ell_pieri_values(s, lam, mu, 1)
            assert a == b


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CASES), st.sampled_from(["geo", "gen"]), st.data())
def test_interpolation_properties(case, kind, data):
    s = desk(*case, kind)
    pts = enumerate_lambda_plus(s, 3)
    lam = data.draw(st.sampled_from(pts))
    mu = data.draw(st.sampled_from(pts))
    p = interpolate_p(s, lam)
    assert p.ell == s.ell(lam)
    assert s.is_invariant(p.poly)
    val = p(s.rho + mu)
    if not in_lambda(s, mu - lam):
        assert val == 0
    assert p_value_by_paths(s, lam, mu) == val
