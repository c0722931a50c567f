from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings, strategies as st

from capelli.exact import Weight
from capelli.lattice import (
    degree_defect, enumerate_lambda, enumerate_lambda_plus, enumerate_paths, in_lambda, leq,
)

from conftest import desk

CASES = [("I", {"n": 2}), ("I", {"n": 3}), ("II", {"n": 3}), ("IVc", {}), ("VIb", {}),
         ("V", {"a": 2, "b": 1})]


def W(*c):
    return Weight(c)


def brute_lambda_plus(s, d):
    return {t for t in product(range(d + 1), repeat=s.rank) if s.ell(Weight(t)) <= d}


def brute_lambda(s, d):
    out = set()
    for k in range(d + 1):
        for combo in combinations_with_replacement(s.lambda1, k):
            out.add(tuple(sum(w.ints()[i] for w in combo) for i in range(s.rank)))
    return out


def test_lambda_plus_case_I(i2):
    assert [w.ints() for w in enumerate_lambda_plus(i2, 2)] == [(0, 0), (1, 0), (2, 0), (0, 1)]
    assert enumerate_lambda_plus(i2, 0) == [W(0, 0)]
    assert [w.ints() for w in enumerate_lambda_plus(i2, 1)] == [(0, 0), (1, 0)]


@pytest.mark.parametrize("case_id,size", CASES)
def test_lambda_plus_against_box_search(case_id, size):
    s = desk(case_id, size)
    got = enumerate_lambda_plus(s, 3)
    assert {w.ints() for w in got} == brute_lambda_plus(s, 3)
    ells = [s.ell(w) for w in got]
    assert ells == sorted(ells)


@pytest.mark.parametrize("case_id,size", CASES)
def test_lambda_against_multisets(case_id, size):
    s = desk(case_id, size)
    assert {w.ints() for w in enumerate_lambda(s, 3)} == brute_lambda(s, 3)


def test_in_lambda_examples(i2):
    e1, e2 = W(1, 0), W(0, 1)
    # e2 in Sigma-dual coordinates is the ambient weight e1 + e2, which is in Lambda_+;
    # the ambient e2 is e2_sigma - e1_sigma here
    amb_e2 = W(-1, 1)
    assert in_lambda(i2, amb_e2) and not amb_e2.is_dominant_lattice()
    assert in_lambda(i2, W(0, 0))
    assert not in_lambda(i2, W(-1, 0))
    assert in_lambda(i2, e1) and in_lambda(i2, e2)


def test_paths_case_I(i2):
    e1, e1e2 = W(1, 0), W(0, 1)  # ambient e1 and e1 + e2
    (p,) = enumerate_paths(i2, e1, e1e2, positive_only=True)
    assert p.steps == (e1, e1e2)
    assert len(enumerate_paths(i2, e1, e1)) == 1
    assert len(enumerate_paths(i2, W(0, 0), e1e2)) == 2
    assert len(enumerate_paths(i2, W(0, 0), e1e2, positive_only=True)) == 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CASES), st.data())
def test_paths_against_step_sequences(case, data):
    s = desk(*case)
    pts = enumerate_lambda_plus(s, 3)
    a = data.draw(st.sampled_from(pts))
    b = data.draw(st.sampled_from(pts))
    d = s.ell(b - a)
    expect = set()
    if d >= 0:
        for seq in product(s.lambda1, repeat=int(d)):
            cur, pts_ = a, [a]
            for e in seq:
                cur = cur + e
                pts_.append(cur)
            if cur == b:
                expect.add(tuple(pts_))
    got = {p.steps for p in enumerate_paths(s, a, b)}
    assert got == expect
    pos = {p.steps for p in enumerate_paths(s, a, b, positive_only=True)}
    assert pos == {t for t in expect if all(w.is_dominant_lattice() for w in t)}


def test_leq_examples(i2):
    e1, amb_e2 = W(1, 0), W(-1, 1)
    assert leq(i2, amb_e2, e1)
    assert not leq(i2, e1, amb_e2)
    assert leq(i2, e1, e1)
    assert leq(i2, e1, W(0, 1))


def test_degree_defect(i2):
    assert degree_defect(i2, W(-1, 1)) == 2
    assert degree_defect(i2, W(0, 0)) == 0


@pytest.mark.parametrize("case_id,size", CASES)
def test_degree_defect_vanishes_on_lambda_plus(case_id, size):
    s = desk(case_id, size)
    assert all(degree_defect(s, t) == 0 for t in enumerate_lambda_plus(s, 3))
    assert all(degree_defect(s, t) >= 0 for t in enumerate_lambda(s, 3))
