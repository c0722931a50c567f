"""Difference operators with factored rational coefficients: f_tau, L, E, D_h
and the path formula for the coefficients of D_h."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .exact import (
    ONE, ZERO, FactoredRationalFunction, LinearForm, Polynomial, UndefinedValue, Weight,
    canonical_factor, falling, frf_sum, mul_reduced, rat,
)
from .lattice import enumerate_paths, in_lambda, lambda_level
from .structure import GroupElement, StructureData


class NonPolynomialResult(ArithmeticError):
    """Denominators did not cancel when applying an operator."""


class NonzeroTailTerm(ArithmeticError):
    """(ad L)^(deg h + 1)(h) is not zero."""


FRF = FactoredRationalFunction


# ----------------------------------------------------------------------------
# f_tau
# ----------------------------------------------------------------------------

def _int_value(x) -> int:
    x = rat(x)
    if x.denominator != 1:
        raise ValueError("pairing is not an integer")
    return int(x)


def f_tau(s: StructureData, tau: Weight) -> FRF:
    """Ratio of falling factorials over Phi and Delta."""
    key = ("f_tau", tau.ints())
    got = s.cache.get(key)
    if got is not None:
        return got
    n = s.rank
    num = Polynomial.constant(1, n)
    for omega in s.phi:
        m = _int_value(omega(tau))
        if m > 0:
            base = omega.to_polynomial(s.k(omega))
            for i in range(m):
                num = num * (base - i)
    factors = []
    for alpha in s.delta:
        m = _int_value(alpha(tau))
        for i in range(m):
            factors.append((alpha.coords, i))
    out = FRF.from_factors(num, factors).reduce()
    s.cache[key] = out
    return out


def f_tau_value(s: StructureData, tau: Weight, z: Weight):
    """f_tau evaluated at a point, straight from the falling factorials."""
    num = ONE
    for omega in s.phi:
        m = _int_value(omega(tau))
        if m > 0:
            num *= falling(omega(z) - s.k(omega), m)
    den = ONE
    for alpha in s.delta:
        m = _int_value(alpha(tau))
        if m > 0:
            den *= falling(alpha(z), m)
    if not den:
        raise UndefinedValue(f"f_{tau.to_json()} has a vanishing denominator at {z.to_json()}")
    return num / den


# ----------------------------------------------------------------------------
# operators
# ----------------------------------------------------------------------------

@dataclass
class DifferenceOperator:
    """sum_tau c_tau(z) T_tau with (T_tau f)(z) = f(z - tau)."""

    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {t: c for t, c in self.terms.items() if not c.is_zero()}

    @classmethod
    def identity(cls, nvars: int) -> "DifferenceOperator":
        return cls(nvars, {Weight.zero(nvars): FRF.constant(1, nvars)})

    @classmethod
    def multiplication(cls, h: Polynomial) -> "DifferenceOperator":
        return cls(h.nvars, {Weight.zero(h.nvars): FRF(h)})

    def support(self) -> list[Weight]:
        return sorted(self.terms, key=lambda t: t.coords, reverse=True)

    def coefficient(self, tau: Weight) -> FRF:
        return self.terms.get(tau, FRF(Polynomial.zero(self.nvars)))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        acc: dict = {t: [c] for t, c in self.terms.items()}
        for t, c in other.terms.items():
            acc.setdefault(t, []).append(c)
        return DifferenceOperator(self.nvars, {t: frf_sum(cs, self.nvars) for t, cs in acc.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DifferenceOperator":
        return DifferenceOperator(self.nvars, {t: v.scale(c) for t, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(t) == other.coefficient(t) for t in keys)

    def to_json(self):
        return [{"tau": t.to_json(), "coef": self.terms[t].to_json()} for t in self.support()]


def build_L(s: StructureData) -> DifferenceOperator:
    key = "operator_L"
    if key not in s.cache:
        s.cache[key] = DifferenceOperator(s.rank, {eta: f_tau(s, eta) for eta in s.lambda1})
    return s.cache[key]


def build_E(s: StructureData) -> DifferenceOperator:
    """E = ell(z) - L."""
    terms = {Weight.zero(s.rank): FRF(s.ell_poly())}
    for eta, c in build_L(s).terms.items():
        terms[eta] = -c
    return DifferenceOperator(s.rank, terms)


def compose(a: DifferenceOperator, b: DifferenceOperator) -> DifferenceOperator:
    """(a o b): c T_x d T_y = c(z) d(z - x) T_{x+y}."""
    acc: dict = {}
    for x, c in a.terms.items():
        for y, d in b.terms.items():
            acc.setdefault(x + y, []).append(c * d.shift(x))
    return DifferenceOperator(a.nvars, {t: frf_sum(cs, a.nvars) for t, cs in acc.items()})


def _merge(items: list, nvars: int, flat: bool = False) -> FRF:
    """Sum factored functions that are each in lowest terms.

    Summands are merged pairwise; a factor is only trial-divided when both
    halves of a merge carry it with the same multiplicity, which is the only
    way it can cancel."""
    work = [f for f in items if not f.is_zero()]
    if not work:
        return FRF(Polynomial.zero(nvars))
    if flat:
        return frf_sum(work, nvars, assume_reduced=True)
    while len(work) > 1:
        work.sort(key=lambda f: sorted(f.denominator.items()))
        nxt = []
        for i in range(0, len(work) - 1, 2):
            nxt.append(frf_sum([work[i], work[i + 1]], nvars, assume_reduced=True))
        if len(work) % 2:
            nxt.append(work[-1])
        work = [f for f in nxt if not f.is_zero()] or [FRF(Polynomial.zero(nvars))]
    return work[0]


def _terms_applied(D: DifferenceOperator, f: Polynomial) -> list:
    return [mul_reduced(c, FRF(f.shift(tau))) for tau, c in D.terms.items()]


def apply(D: DifferenceOperator, f: Polynomial) -> Polynomial:
    """D(f) as a polynomial; NonPolynomialResult if denominators survive."""
    total = _merge(_terms_applied(D, f), f.nvars)
    if total.denominator:
        raise NonPolynomialResult(f"leftover denominator factors {total.factors()}")
    return total.numerator


def apply_expanded(D: DifferenceOperator, f: Polynomial) -> Polynomial:
    """Same as apply, via one common denominator and a full reduction."""
    total = frf_sum([c * f.shift(tau) for tau, c in D.terms.items()], f.nvars)
    if total.denominator:
        raise NonPolynomialResult(f"leftover denominator factors {total.factors()}")
    return total.numerator


def apply_to_rational(D: DifferenceOperator, f: FRF) -> FRF:
    f = f.reduce()
    return _merge([mul_reduced(c, f.shift(tau)) for tau, c in D.terms.items()], f.nvars)


# ----------------------------------------------------------------------------
# W-action on coefficients
# ----------------------------------------------------------------------------

def transport(g: GroupElement, c: FRF) -> FRF:
    """z -> c(g^{-1} z)."""
    num = g.act_poly(c.numerator)
    den = {}
    sign = 1
    for (form, shift), m in c.denominator.items():
        image = g.act_form(LinearForm(form))
        f, sh, sg = canonical_factor(image.coords, shift)
        if m % 2 and sg < 0:
            sign = -sign
        den[(f, sh)] = den.get((f, sh), 0) + m
    return FRF(num if sign == 1 else -num, den)


def _orbit_representatives(s: StructureData, weights) -> dict:
    """Map each weight to (representative, element sending rep to it)."""
    out: dict = {}
    for w in sorted(weights, key=lambda t: t.coords, reverse=True):
        if w in out:
            continue
        for g in s.group:
            img = g.act_weight(w)
            if img not in out:
                out[img] = (w, g)
    return out


# ----------------------------------------------------------------------------
# ad L and D_h
# ----------------------------------------------------------------------------

def ad_L_coefficient(s: StructureData, level: Mapping, sigma: Weight) -> FRF:
    """Coefficient at sigma of [L, sum_tau c_tau T_tau]."""
    items = []
    for eta in s.lambda1:
        prev = sigma - eta
        c = level.get(prev)
        if c is None:
            continue
        f = f_tau(s, eta)
        items.append(mul_reduced(f, c.shift(eta)))
        items.append(-mul_reduced(c, f.shift(prev)))
    return _merge(items, s.rank, flat=True)


def ad_L(s: StructureData, D: DifferenceOperator) -> DifferenceOperator:
    candidates = {t + eta for t in D.terms for eta in s.lambda1}
    out = {}
    for sigma in candidates:
        c = ad_L_coefficient(s, D.terms, sigma)
        if not c.is_zero():
            out[sigma] = c
    return DifferenceOperator(s.rank, out)


def _next_level(s: StructureData, level: dict, d: int, use_symmetry: bool) -> dict:
    """(1/(d+1)) [L, level], where level holds the shifts with ell = d."""
    cands = {tuple(a + b for a, b in zip(t.ints(), eta.ints()))
             for t in level for eta in s.lambda1}
    cands = [s.weight(t) for t in cands]
    inv = rat(1) / (d + 1)
    out: dict = {}
    if use_symmetry:
        reps = _orbit_representatives(s, cands)
        done: dict = {}
        for sigma in cands:
            rep, g = reps[sigma]
            if rep not in done:
                done[rep] = ad_L_coefficient(s, level, rep).scale(inv)
            c = done[rep]
            if c.is_zero():
                continue
            out[sigma] = c if sigma == rep else transport(g, c)
    else:
        for sigma in cands:
            c = ad_L_coefficient(s, level, sigma).scale(inv)
            if not c.is_zero():
                out[sigma] = c
    return out


def _levels(s: StructureData, h: Polynomial, use_symmetry: bool) -> list:
    """[(ad L)^d(h) / d! for d = 0 .. deg h + 1], each as a shift -> coefficient dict."""
    key = ("ad_levels", h, use_symmetry)
    got = s.cache.get(key)
    if got is not None:
        return got
    if not s.is_invariant(h):
        raise ValueError("h must be W-invariant")
    deg = max(h.degree(), 0)
    level = {Weight.zero(s.rank): FRF(h)} if not h.is_zero() else {}
    out = [level]
    for d in range(deg + 1):
        level = _next_level(s, level, d, use_symmetry) if level else {}
        out.append(level)
    s.cache[key] = out
    return out


def d_operator(s: StructureData, h: Polynomial, use_symmetry: bool = True) -> DifferenceOperator:
    """D_h = sum_d (ad L)^d(h) / d!, checked to stop after deg h."""
    levels = _levels(s, h, use_symmetry)
    if levels[-1]:
        raise NonzeroTailTerm(f"(ad L)^{len(levels) - 1}(h) has support {sorted(t.ints() for t in levels[-1])}")
    terms: dict = {}
    for level in levels[:-1]:
        terms.update(level)
    return DifferenceOperator(s.rank, terms)


def nilpotency_tail(s: StructureData, h: Polynomial, use_symmetry: bool = True) -> DifferenceOperator:
    """(ad L)^(deg h + 1)(h) / (deg h + 1)!, computed level by level."""
    return DifferenceOperator(s.rank, _levels(s, h, use_symmetry)[-1])


def _L_over_common_denominator(s: StructureData):
    """(delta, [(eta, A_eta)]) with f_eta = A_eta / delta for every eta in Lambda_1."""
    key = "L_common"
    got = s.cache.get(key)
    if got is not None:
        return got
    L = build_L(s)
    lcm: dict = {}
    for c in L.terms.values():
        for k, m in c.denominator.items():
            lcm[k] = max(lcm.get(k, 0), m)
    delta = FRF(Polynomial.constant(1, s.rank), lcm).denominator_polynomial()
    pieces = []
    for eta, c in L.terms.items():
        extra = {k: m - c.denominator.get(k, 0) for k, m in lcm.items() if m > c.denominator.get(k, 0)}
        pieces.append((eta, c._times_factors(extra)))
    got = (delta, pieces)
    s.cache[key] = got
    return got


def apply_L(s: StructureData, g: Polynomial) -> Polynomial:
    """L(g) with one exact division by the common denominator."""
    delta, pieces = _L_over_common_denominator(s)
    total = Polynomial.zero(s.rank)
    for eta, a in pieces:
        total = total + a * g.shift(eta)
    q = total.divide_exact(delta)
    if q is None:
        raise NonPolynomialResult("L(g) is not a polynomial")
    return q


def apply_E(s: StructureData, g: Polynomial) -> Polynomial:
    """E(g) = ell g - L(g)."""
    return s.ell_poly() * g - apply_L(s, g)


def ad_power_applied(s: StructureData, h: Polynomial, f: Polynomial, d: int) -> Polynomial:
    """((ad L)^d h)(f) = sum_j C(d,j) (-1)^j L^(d-j)(h L^j f), all in polynomials."""
    lf = [f]
    for _ in range(d):
        lf.append(apply_L(s, lf[-1]))
    total = Polynomial.zero(s.rank)
    for j in range(d + 1):
        g = h * lf[j]
        for _ in range(d - j):
            g = apply_L(s, g)
        total = total + g.scale(math.comb(d, j) * (-1) ** j)
    return total


def apply_dh(s: StructureData, h: Polynomial, f: Polynomial, check_tail: bool = False) -> Polynomial:
    """D_h(f) without building D_h: sum_d ((ad L)^d h)(f) / d!.

    Every intermediate object is an invariant polynomial, so this route
    stays cheap where the operator coefficients would be large."""
    deg = max(h.degree(), 0)
    top = deg + 1 if check_tail else deg
    lf = [f]
    for _ in range(top):
        lf.append(apply_L(s, lf[-1]))
    # levels[d] = ((ad L)^d h)(f)
    levels = [Polynomial.zero(s.rank) for _ in range(top + 1)]
    for j in range(top + 1):
        g = h * lf[j]
        for i in range(top - j + 1):
            d = i + j
            levels[d] = levels[d] + g.scale(math.comb(d, j) * (-1) ** j)
            if i < top - j:
                g = apply_L(s, g)
    total = Polynomial.zero(s.rank)
    for d in range(deg + 1):
        total = total + levels[d].scale(rat(1) / math.factorial(d))
    if check_tail and not levels[deg + 1].is_zero():
        raise NonzeroTailTerm(f"(ad L)^{deg + 1}(h) does not kill the test function")
    return total


def _bracket_weights(d: int) -> list:
    return [rat((-1) ** (d - i)) / (math.factorial(i) * math.factorial(d - i)) for i in range(d + 1)]


def b_coeff_paths(s: StructureData, h: Polynomial, tau: Weight) -> FRF:
    """Coefficient of T_tau in D_h from the sum over all paths 0 -> tau."""
    n = s.rank
    zero = Weight.zero(n)
    if not in_lambda(s, tau):
        return FRF(Polynomial.zero(n))
    d = int(s.ell(tau))
    if d > max(h.degree(), 0):
        return FRF(Polynomial.zero(n))
    weights = _bracket_weights(d)
    shifted: dict = {}
    items = []
    for path in enumerate_paths(s, zero, tau):
        steps = path.steps
        bracket = Polynomial.zero(n)
        for i, t in enumerate(steps):
            key = t.ints()
            if key not in shifted:
                shifted[key] = h.shift(t)
            bracket = bracket + shifted[key].scale(weights[i])
        if bracket.is_zero():
            continue
        term = FRF(bracket)
        for i in range(1, len(steps)):
            term = mul_reduced(term, f_tau(s, steps[i] - steps[i - 1]).shift(steps[i - 1]))
        items.append(term)
    return _merge(items, n)


def b_value_paths(s: StructureData, h: Polynomial, tau: Weight, z: Weight):
    """b_tau^h at a point by the path sum with numeric factors."""
    d = int(s.ell(tau))
    weights = _bracket_weights(d)
    total = ZERO
    for path in enumerate_paths(s, Weight.zero(s.rank), tau):
        steps = path.steps
        bracket = sum((weights[i] * h.evaluate((z - t).coords) for i, t in enumerate(steps)), ZERO)
        if not bracket:
            continue
        prod = bracket
        for i in range(1, len(steps)):
            prod *= f_tau_value(s, steps[i] - steps[i - 1], z - steps[i - 1])
        total += prod
    return total


def minus(h: Polynomial) -> Polynomial:
    """h^-(z) = h(-z)."""
    return Polynomial(h.nvars, {e: (c if sum(e) % 2 == 0 else -c) for e, c in h.terms.items()}, _clean=True)


# ----------------------------------------------------------------------------
# structure of the coefficients b_tau^h
# ----------------------------------------------------------------------------

def coefficient_degree(c: FRF) -> int:
    """deg numerator minus the number of denominator factors (with multiplicity)."""
    if c.is_zero():
        return -1
    return c.numerator.degree() - sum(c.denominator.values())


def _positive_root_of(s: StructureData, form: tuple):
    """(root datum, sign) with form = sign * alpha for alpha in Delta+, or None."""
    neg = tuple(-x for x in form)
    for d in s.delta_plus:
        if d.root.coords == form:
            return d, 1
        if d.root.coords == neg:
            return d, -1
    return None


def numerator_divisor_factors(s: StructureData, tau: Weight) -> list:
    """Linear factors (form, shift) of prod over omega(tau) > 0 of [omega(z) - k_omega v omega(tau)]."""
    out = []
    for omega in s.phi:
        m = _int_value(omega(tau))
        for i in range(m):
            out.append((omega.coords, s.k(omega) + i))
    return out


def structure_violations(s: StructureData, D: DifferenceOperator, h: Polynomial,
                         check_numerator: bool = True) -> list[str]:
    """Every way in which the coefficients of D = D_h break the degree,
    denominator, numerator and leading-term statements; empty when all hold."""
    from .lattice import leq

    bad = []
    deg_h = max(h.degree(), 0)
    for tau, c in D.terms.items():
        c = c.reduce()
        tag = f"tau={tau.to_json()}"
        if coefficient_degree(c) > deg_h:
            bad.append(f"{tag}: degree {coefficient_degree(c)} > deg h = {deg_h}")
        for (form, shift), m in c.denominator.items():
            if m != 1:
                bad.append(f"{tag}: factor {form} - {shift} has multiplicity {m}")
            hit = _positive_root_of(s, form)
            if hit is None:
                bad.append(f"{tag}: denominator form {form} is not a root")
                continue
            d, sign = hit
            # sign * (alpha(z) - sign * shift) = alpha(z - tau) - i
            i = sign * shift - d.root(tau)
            if i == 0 or (tau + d.coroot * i) not in D.terms:
                bad.append(f"{tag}: shift i = {i} for root {d.root.to_json()} is not in S(alpha, tau)")
        if check_numerator:
            num = c.numerator
            for form, shift in numerator_divisor_factors(s, tau):
                q = num.divide_linear(form, shift)
                if q is None:
                    bad.append(f"{tag}: numerator not divisible by {form} - {shift}")
                    break
                num = q
    support = list(D.terms)
    maximal = [t for t in support if not any(u != t and leq(s, t, u) for u in support)]
    for tau in maximal:
        tag = f"maximal tau={tau.to_json()}"
        if not tau.is_dominant_lattice():
            bad.append(f"{tag}: not in Lambda_+")
        if s.ell(tau) != deg_h:
            bad.append(f"{tag}: ell = {s.ell(tau)} != deg h")
        b, f = D.terms[tau], f_tau(s, tau)
        left = b.numerator * f.denominator_polynomial()
        right = f.numerator * b.denominator_polynomial()
        ratio = left.leading()[1] / right.leading()[1] if not right.is_zero() else None
        if ratio is None or not ratio or left != right.scale(ratio):
            bad.append(f"{tag}: coefficient is not a multiple of f_tau")
    return bad


def level_set(s: StructureData, d: int) -> list[Weight]:
    return [s.weight(t) for t in sorted(lambda_level(s, d), reverse=True)]


__all__ = [
    "DifferenceOperator", "NonPolynomialResult", "NonzeroTailTerm",
    "f_tau", "f_tau_value", "build_L", "build_E", "apply", "apply_expanded", "apply_to_rational",
    "compose", "ad_L", "ad_L_coefficient", "transport", "d_operator", "b_coeff_paths", "b_value_paths",
    "minus", "level_set", "nilpotency_tail", "structure_violations", "coefficient_degree",
    "numerator_divisor_factors", "apply_dh", "ad_power_applied", "apply_L", "apply_E",
]
