"""Invariant polynomial bases and the interpolation polynomials p_lambda."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Mapping

from .exact import (
    ONE, ZERO, Polynomial, SingularSystem, UndefinedValue, Weight, binomial_poly,
    row_reduce, solve_exact,
)
from .lattice import enumerate_lambda_plus, in_lambda
from .structure import StructureData, classify_rho


class DimensionMismatch(ArithmeticError):
    """The invariant space and Lambda_+(d) have different sizes."""


class NotInvariant(ValueError):
    pass


class UndefinedNormalizer(ZeroDivisionError):
    """f_lambda(rho + lambda) hits a vanishing denominator."""


# ----------------------------------------------------------------------------
# invariant polynomials
# ----------------------------------------------------------------------------

def _monomials(nvars: int, k: int) -> list[tuple]:
    """Exponent tuples of total degree k, grlex-descending."""
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _invariant_component(s: StructureData, k: int) -> list[Polynomial]:
    key = ("inv_component", k)
    got = s.cache.get(key)
    if got is not None:
        return got
    n = s.rank
    mons = _monomials(n, k)
    index = {e: i for i, e in enumerate(mons)}
    rows = []
    for g in s.generators:
        # column j: image of monomial j under g, minus itself
        images = [g.act_poly(Polynomial.monomial(e)) for e in mons]
        block = [[ZERO] * len(mons) for _ in mons]
        for j, img in enumerate(images):
            for e, c in img.terms.items():
                block[index[e]][j] += c
            block[j][j] -= ONE
        rows.extend(r for r in block if any(r))
    if rows:
        red, piv = row_reduce(rows)
        free = [c for c in range(len(mons)) if c not in piv]
        vecs = []
        for f in free:
            v = [ZERO] * len(mons)
            v[f] = ONE
            for row, p in zip(red, piv):
                v[p] = -row[f]
            vecs.append(v)
        vecs, _ = row_reduce(vecs) if vecs else ([], [])
    else:
        vecs = [[ONE if i == j else ZERO for i in range(len(mons))] for j in range(len(mons))]
    out = [Polynomial(n, {mons[i]: c for i, c in enumerate(v) if c}, _clean=True) for v in vecs]
    for p in out:
        if not s.is_invariant(p):
            raise AssertionError("invariant basis element failed the invariance check")
    s.cache[key] = out
    return out


@dataclass(frozen=True)
class InvariantBasis:
    degree_bound: int
    elements: tuple
    degrees: tuple

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def invariant_basis(s: StructureData, d: int) -> InvariantBasis:
    """A basis of the W-invariant polynomials of degree <= d, graded by degree;
    inside each degree the coefficient vectors are in reduced echelon form."""
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    elems, degs = [], []
    for k in range(d + 1):
        comp = _invariant_component(s, k)
        elems.extend(comp)
        degs.extend([k] * len(comp))
    return InvariantBasis(d, tuple(elems), tuple(degs))


def invariant_dimension(s: StructureData, d: int) -> int:
    return len(invariant_basis(s, d))


# ----------------------------------------------------------------------------
# interpolation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CapelliPolynomial:
    lam: Weight
    poly: Polynomial
    rho: Weight

    @property
    def ell(self) -> int:
        return self.poly.degree()

    def __call__(self, z):
        return self.poly.evaluate(z)

    def to_json(self) -> dict:
        return {"lambda": self.lam.to_json(), "ell": max(self.poly.degree(), 0),
                "poly": self.poly.to_json()}


def _ell_of(s: StructureData, lam: Weight) -> int:
    v = s.ell(lam)
    if v.denominator != 1 or v < 0:
        raise ValueError(f"{lam!r} is not in Lambda_+")
    return int(v)


def _eval_matrix(s: StructureData, d: int):
    key = ("eval_matrix", d)
    got = s.cache.get(key)
    if got is not None:
        return got
    basis = invariant_basis(s, d)
    points = enumerate_lambda_plus(s, d)
    if len(basis) != len(points):
        raise DimensionMismatch(
            f"{len(basis)} invariant polynomials of degree <= {d} but {len(points)} points in Lambda_+({d})")
    rows = [[b.evaluate((s.rho + mu).coords) for b in basis] for mu in points]
    s.cache[key] = (basis, points, rows)
    return basis, points, rows


def interpolate_p(s: StructureData, lam: Weight) -> CapelliPolynomial:
    """p_lambda from one exact square solve over the invariant basis."""
    lam = s.weight(lam.coords) if isinstance(lam, Weight) else s.weight(lam)
    if any(c < 0 for c in lam.coords) or not lam.is_integral():
        raise ValueError(f"{lam!r} is not in Lambda_+")
    key = ("p", lam.ints())
    got = s.cache.get(key)
    if got is not None:
        return got
    d = _ell_of(s, lam)
    basis, points, rows = _eval_matrix(s, d)
    rhs = [ONE if mu == lam else ZERO for mu in points]
    # rows are indexed by points, columns by basis elements
    coeffs = solve_exact(rows, rhs)
    poly = Polynomial.zero(s.rank)
    for c, b in zip(coeffs, basis):
        if c:
            poly = poly + b.scale(c)
    out = CapelliPolynomial(lam, poly, s.rho)
    s.cache[key] = out
    return out


def p_poly(s: StructureData, lam) -> Polynomial:
    return interpolate_p(s, lam if isinstance(lam, Weight) else s.weight(lam)).poly


def p_value_by_paths(s: StructureData, lam: Weight, mu: Weight):
    """p_lambda(rho + mu) as (1/d!) times the weighted sum over positive paths."""
    from .diffop import f_tau_value

    if not in_lambda(s, mu - lam):
        # includes ell(mu - lambda) < 0; the value vanishes by extra vanishing
        return ZERO
    d = int(s.ell(mu - lam))
    lam_t = lam.ints()
    steps = list(s.lambda1)
    memo: dict = {}

    def S(nu: Weight):
        t = nu.ints()
        if t in memo:
            return memo[t]
        if t == lam_t:
            val = ONE
        elif s.ell(nu - lam) <= 0:
            val = ZERO
        else:
            val = ZERO
            fz = None
            for eta in steps:
                prev = nu - eta
                if any(c < 0 for c in prev.coords):
                    continue
                if not in_lambda(s, prev - lam):
                    continue
                sub = S(prev)
                if sub:
                    fz = f_tau_value(s, eta, s.rho + nu)
                    val += sub * fz
        memo[t] = val
        return val

    return S(mu) / math.factorial(d)


def normalize_P(s: StructureData, lam: Weight) -> Polynomial:
    """P_lambda = f_lambda(rho + lambda) p_lambda."""
    from .diffop import f_tau_value

    key = ("P", lam.ints())
    got = s.cache.get(key)
    if got is not None:
        return got
    try:
        c = f_tau_value(s, lam, s.rho + lam)
    except UndefinedValue as exc:
        raise UndefinedNormalizer(str(exc)) from exc
    out = interpolate_p(s, lam).poly.scale(c)
    s.cache[key] = out
    return out


def e_poly(s: StructureData, lam: Weight) -> Polynomial:
    """e_lambda = prod_i P_{eta_i}^{lambda_i}."""
    out = Polynomial.constant(1, s.rank)
    for i, m in enumerate(lam.ints()):
        if m:
            out = out * normalize_P(s, s.basis_weight(i)) ** m
    return out


# ----------------------------------------------------------------------------
# expansions
# ----------------------------------------------------------------------------

def _expand_p(s: StructureData, g: Polynomial, d: int) -> dict:
    points = enumerate_lambda_plus(s, d)
    coeffs: dict = {}
    for lam in points:
        z = (s.rho + lam).coords
        val = g.evaluate(z)
        lam_ell = s.ell(lam)
        for mu, c in coeffs.items():
            if c and s.ell(mu) < lam_ell:
                val -= c * interpolate_p(s, mu).poly.evaluate(z)
        coeffs[lam] = val
    total = Polynomial.zero(s.rank)
    for mu, c in coeffs.items():
        if c:
            total = total + interpolate_p(s, mu).poly.scale(c)
    if total != g:
        raise ValueError("polynomial is not in the span of p_lambda with ell(lambda) <= d")
    return {mu: c for mu, c in coeffs.items() if c}


def expand_in_basis(s: StructureData, g: Polynomial, basis: str = "p", d: int | None = None) -> dict:
    """Coefficients of an invariant polynomial in the p-, P- or e-basis."""
    if not s.is_invariant(g):
        raise NotInvariant("polynomial is not W-invariant")
    if d is None:
        d = max(g.degree(), 0)
    if g.degree() > d:
        raise ValueError("degree exceeds the bound")
    pc = _expand_p(s, g, d)
    if basis == "p":
        return pc
    if basis == "P":
        from .diffop import f_tau_value

        out = {}
        for lam, c in pc.items():
            try:
                out[lam] = c / f_tau_value(s, lam, s.rho + lam)
            except UndefinedValue as exc:
                raise UndefinedNormalizer(str(exc)) from exc
        return out
    if basis == "e":
        points = enumerate_lambda_plus(s, d)
        cols = [_expand_p(s, e_poly(s, lam), d) for lam in points]
        matrix = [[col.get(mu, ZERO) for col in cols] for mu in points]
        sol = solve_exact(matrix, [pc.get(mu, ZERO) for mu in points])
        return {lam: c for lam, c in zip(points, sol) if c}
    raise ValueError(f"unknown basis {basis!r}")


def resum(s: StructureData, coeffs: Mapping, basis: str = "p") -> Polynomial:
    total = Polynomial.zero(s.rank)
    for lam, c in coeffs.items():
        if basis == "p":
            b = interpolate_p(s, lam).poly
        elif basis == "P":
            b = normalize_P(s, lam)
        elif basis == "e":
            b = e_poly(s, lam)
        else:
            raise ValueError(f"unknown basis {basis!r}")
        total = total + b.scale(c)
    return total


# ----------------------------------------------------------------------------
# binomial identities
# ----------------------------------------------------------------------------

def ell_shifted(s: StructureData, lam: Weight | None = None) -> Polynomial:
    """ell(z) - ell(rho + lambda) as a polynomial."""
    base = s.rho if lam is None else s.rho + lam
    return s.ell_poly() - Polynomial.constant(s.ell(base), s.rank)


def binomial_identity_sides(s: StructureData, k: int) -> tuple[Polynomial, Polynomial]:
    """C(ell(z) - ell(rho), k) and the sum of p_tau over ell(tau) = k."""
    left = binomial_poly(ell_shifted(s), k)
    right = Polynomial.zero(s.rank)
    for tau in enumerate_lambda_plus(s, k):
        if s.ell(tau) == k:
            right = right + interpolate_p(s, tau).poly
    return left, right


def ell_pieri_values(s: StructureData, lam: Weight, mu: Weight, k: int):
    """Both sides of C(ell(mu-lam), k) p_lam(rho+mu) = sum_tau p_lam(rho+tau) p_tau(rho+mu)."""
    from .exact import binomial

    left = binomial(s.ell(mu - lam), k) * interpolate_p(s, lam)(s.rho + mu)
    right = ZERO
    target = s.ell(lam) + k
    for tau in enumerate_lambda_plus(s, int(target)):
        if s.ell(tau) == target:
            right += interpolate_p(s, lam)(s.rho + tau) * interpolate_p(s, tau)(s.rho + mu)
    return left, right


def ell_pieri_polynomials(s: StructureData, lam: Weight, k: int) -> tuple[Polynomial, Polynomial]:
    left = binomial_poly(ell_shifted(s, lam), k) * interpolate_p(s, lam).poly
    right = Polynomial.zero(s.rank)
    target = s.ell(lam) + k
    for tau in enumerate_lambda_plus(s, int(target)):
        if s.ell(tau) == target:
            c = interpolate_p(s, lam)(s.rho + tau)
            if c:
                right = right + interpolate_p(s, tau).poly.scale(c)
    return left, right


def is_dominant(s: StructureData) -> bool:
    return classify_rho(s).dominant


__all__ = [
    "InvariantBasis", "CapelliPolynomial", "DimensionMismatch", "NotInvariant", "UndefinedNormalizer",
    "SingularSystem", "invariant_basis", "invariant_dimension", "interpolate_p", "p_poly",
    "p_value_by_paths", "normalize_P", "e_poly", "expand_in_basis", "resum", "ell_shifted",
    "binomial_identity_sides", "ell_pieri_values", "ell_pieri_polynomials",
]
