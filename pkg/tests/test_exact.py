from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from capelli.exact import (
    FactoredRationalFunction as FRF, LinearForm, Polynomial, SingularSystem, UndefinedValue, Weight,
    binomial_poly, canonical_factor, evaluate, falling, fmt_rat, frf_sum, mul_reduced, nullspace, rank,
    rat, reduce, shift_argument, solve_exact,
)

X = sympy.symbols("x0 x1 x2")


def to_sympy(p: Polynomial):
    return sum((sympy.Rational(int(c.numerator), int(c.denominator)) *
                sympy.prod([X[i] ** e for i, e in enumerate(exp)]) for exp, c in p.terms.items()),
               sympy.Integer(0))


small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
terms3 = st.dictionaries(st.tuples(*[st.integers(0, 3)] * 3), small, max_size=6)


def poly3(t):
    return Polynomial(3, t)


def test_rat_literals():
    assert rat("-3/4") == Fraction(-3, 4)
    assert rat(Fraction(1, 3)) == rat("1/3")
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("1/0")
    assert fmt_rat(rat("6/4")) == "3/2"


def test_falling_factorial():
    assert falling(5, 3) == 60
    assert falling(rat("1/2"), 2) == rat("-1/4")
    assert falling(3, -2) == Fraction(1, 20)
    with pytest.raises(UndefinedValue):
        falling(-1, -1)


def test_evaluate_ell_at_rho_case_I():
    # ell = w1 + 2 w2; rho is (3/2, 1/2) in ambient coordinates, (r, s) = (1, 1/2) in Sigma-dual ones
    ell = Polynomial(2, {(1, 0): 1, (0, 1): 2})
    assert evaluate(ell, Weight((1, rat("1/2")))) == 2
    assert evaluate(Polynomial.constant(1, 2), Weight((7, 9))) == 1
    assert evaluate(Polynomial(2, {(2, 0): 1}), Weight((1, 0))) == 1


def test_shift_argument_examples():
    sq = Polynomial(2, {(2, 0): 1})
    assert shift_argument(sq, Weight((1, 0))) == Polynomial(2, {(2, 0): 1, (1, 0): -2, (0, 0): 1})
    one = Polynomial.constant(1, 2)
    assert shift_argument(one, Weight((3, -1))) == one
    ell = Polynomial(2, {(1, 0): 1, (0, 1): 2})
    assert shift_argument(ell, Weight((1, 0))) == ell - 1


def test_solve_examples():
    assert solve_exact([[1, 0], [0, 1]], [rat("3/2"), rat("1/2")]) == (rat("3/2"), rat("1/2"))
    assert solve_exact([[2, 1], [3, 1]], [0, 1]) == (1, -2)
    with pytest.raises(SingularSystem):
        solve_exact([[1, 1], [1, 1]], [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_matches_sympy(m, b):
    M = sympy.Matrix(m)
    if M.det() == 0:
        with pytest.raises(SingularSystem):
            solve_exact(m, b)
        assert rank(m) < 3
        return
    expect = M.LUsolve(sympy.Matrix(b))
    got = solve_exact(m, b)
    assert [Fraction(int(g.numerator), int(g.denominator)) for g in got] == \
        [Fraction(int(e.p), int(e.q)) for e in expect]


def test_nullspace_annihilates():
    rows = [[1, 2, 3], [2, 4, 6]]
    ns = nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@settings(max_examples=50, deadline=None)
@given(terms3, terms3)
def test_ring_ops_match_sympy(a, b):
    p, q = poly3(a), poly3(b)
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p - q) - (to_sympy(p) - to_sympy(q))) == 0


@settings(max_examples=50, deadline=None)
@given(terms3, st.tuples(*[st.integers(-3, 3)] * 3))
def test_shift_matches_substitution(a, eta):
    p = poly3(a)
    sub = {X[i]: X[i] - eta[i] for i in range(3)}
    assert sympy.expand(to_sympy(p.shift(Weight(eta))) - to_sympy(p).subs(sub, simultaneous=True)) == 0


@settings(max_examples=40, deadline=None)
@given(terms3, st.tuples(*[st.integers(-2, 2)] * 3).filter(any), st.integers(-3, 3))
def test_divide_linear_roundtrip(a, form, shift):
    p = poly3(a)
    lin = LinearForm(form).to_polynomial(shift)
    assert (p * lin).divide_linear(form, shift) == p


def test_binomial_poly():
    x = Polynomial.variable(0, 1)
    b = binomial_poly(x, 3)
    for v in range(-3, 6):
        assert b.evaluate((v,)) == int(sympy.binomial(v, 3))


def test_reduce_examples():
    w1, w2 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    f = FRF.from_factors((w1 - w2) * (w1 + w2), [((1, -1), 0)])
    r = reduce(f)
    assert r.numerator == w1 + w2 and r.is_polynomial()
    g = FRF.from_factors((w1 - w2 - 1) * (w1 - rat("1/2")), [((1, -1), 0)])
    assert reduce(g) == g and reduce(g).denominator_degree() == 1
    z = reduce(FRF.from_factors(Polynomial.zero(2), [((1, 0), 3)]))
    assert z.is_zero() and z.is_polynomial()


def test_canonical_factor_sign():
    assert canonical_factor((-1, 2), 3) == ((1, -2), -3, -1)
    with pytest.raises(ValueError):
        canonical_factor((0, 0), 1)


@settings(max_examples=40, deadline=None)
@given(terms3, terms3, st.integers(-2, 2), st.integers(-2, 2))
def test_frf_sum_and_product_evaluate(a, b, s1, s2):
    p, q = poly3(a), poly3(b)
    f = FRF.from_factors(p, [((1, -1, 0), s1)])
    g = FRF.from_factors(q, [((0, 1, 1), s2), ((1, -1, 0), s1)])
    pt = (rat(7), rat("1/3"), rat("-5/2"))
    tot = frf_sum([f, g], 3)
    assert tot.evaluate(pt) == f.evaluate(pt) + g.evaluate(pt)
    assert mul_reduced(f, g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    with pytest.raises(UndefinedValue):
        FRF.from_factors(Polynomial.constant(1, 3), [((1, 0, 0), 2)]).evaluate((2, 0, 0))
