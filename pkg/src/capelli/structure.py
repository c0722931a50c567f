"""The quadruple (Gamma, Sigma, W, ell) with its derived root data.

Everything is stored in Sigma-coordinates: linear forms are integer vectors in
the basis ``omega_1..omega_r`` and points of V are vectors of values
``omega_i(v)``. A group element is recorded by its integer matrix on forms
(column j holds the coordinates of ``w(omega_j)``); weights transform by the
inverse transpose.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exact import (
    ONE, ZERO, LinearForm, Polynomial, Weight, fmt_rat, mat_inverse, nullspace,
    primitive_integer_vector, rank, rat,
)

DEFAULT_GROUP_BOUND = 10080


class StructureError(Exception):
    """Malformed structure data."""


class GroupTooLarge(StructureError):
    pass


class NotAReflection(StructureError):
    pass


class NotInV0(StructureError):
    """The chosen parameters do not define a point of V_0."""


# ----------------------------------------------------------------------------
# group elements
# ----------------------------------------------------------------------------

def _int_matrix(rows) -> tuple:
    out = []
    for row in rows:
        r = []
        for x in row:
            q = rat(x)
            if q.denominator != 1:
                raise StructureError("group matrices must be integral in the Sigma basis")
            r.append(int(q))
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", _int_matrix(self.matrix))

    @classmethod
    def identity(cls, r: int) -> "GroupElement":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r)))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.matrix, other.matrix
        n = len(a)
        return GroupElement(tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                                  for i in range(n)))

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(self.rank) for j in range(self.rank))

    def inverse(self) -> "GroupElement":
        return GroupElement(mat_inverse(self.matrix))

    @cached_property
    def _weight_matrix(self) -> tuple:
        inv = mat_inverse(self.matrix)
        n = self.rank
        return tuple(tuple(inv[j][i] for j in range(n)) for i in range(n))

    def weight_matrix(self) -> tuple:
        """Matrix acting on Sigma-dual coordinates (inverse transpose)."""
        return self._weight_matrix

    def act_form(self, f: LinearForm) -> LinearForm:
        m = self.matrix
        return LinearForm(tuple(sum((m[i][j] * f.coords[j] for j in range(len(m))), ZERO)
                                for i in range(len(m))))

    def act_weight(self, w: Weight) -> Weight:
        m = self.weight_matrix()
        return Weight(tuple(sum((m[i][j] * w.coords[j] for j in range(len(m))), ZERO)
                            for i in range(len(m))))

    def act_poly(self, p: Polynomial) -> Polynomial:
        """``p o w^{-1}``, the natural left action on functions."""
        return p.linear_substitute(self.matrix)

    def minus_identity_rank(self) -> int:
        n = self.rank
        return rank([[self.matrix[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)])


def group_bound() -> int:
    raw = os.environ.get("CAPELLI_MAX_GROUP")
    if raw is None or not raw.strip():
        return DEFAULT_GROUP_BOUND
    return int(raw)


def close_group(generators: Sequence[GroupElement], bound: int | None = None,
                rank_hint: int | None = None) -> list[GroupElement]:
    """Breadth-first closure; identity first, then in discovery order."""
    if bound is None:
        bound = group_bound()
    if not generators:
        if rank_hint is None:
            raise ValueError("need rank_hint to close an empty generator list")
        return [GroupElement.identity(rank_hint)]
    r = generators[0].rank
    ident = GroupElement.identity(r)
    seen = {ident.matrix: ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = g * s
            if h.matrix not in seen:
                seen[h.matrix] = h
                order.append(h)
                if len(order) > bound:
                    raise GroupTooLarge(f"group closure exceeds {bound} elements")
                queue.append(h)
    return order


# ----------------------------------------------------------------------------
# roots
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    root: LinearForm
    coroot: Weight
    positive: bool


def reflection_root(g: GroupElement) -> tuple[LinearForm, Weight]:
    """Root and coroot of a reflection, with the root chosen positive when
    its coordinates have a definite sign (first nonzero entry otherwise)."""
    n = g.rank
    d = [[g.matrix[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    if rank(d) != 1 or not (g * g).is_identity():
        raise NotAReflection("element is not a reflection (fixed space of codimension != 1)")
    col = next(j for j in range(n) if any(d[i][j] for i in range(n)))
    alpha = primitive_integer_vector([d[i][col] for i in range(n)])
    if not all(a >= 0 for a in alpha) and not all(a <= 0 for a in alpha):
        lead = next(a for a in alpha if a)
        if lead < 0:
            alpha = tuple(-a for a in alpha)
    elif all(a <= 0 for a in alpha):
        alpha = tuple(-a for a in alpha)
    # column j of (M - I) equals -coroot_j * alpha
    piv = next(i for i in range(n) if alpha[i])
    coroot = tuple(-rat(d[piv][j]) / alpha[piv] for j in range(n))
    root = LinearForm(alpha)
    cw = Weight(coroot)
    if root(cw) != 2:
        raise NotAReflection("reflection does not pair its root with its coroot to 2")
    return root, cw


def extract_roots(group: Sequence[GroupElement]) -> list[RootDatum]:
    """All roots (both signs) from the reflections of a closed group."""
    out: dict = {}
    for g in group:
        if g.is_identity() or not (g * g).is_identity() or g.minus_identity_rank() != 1:
            continue
        a, c = reflection_root(g)
        for sgn in (1, -1):
            key = tuple(sgn * x for x in a.coords)
            if key not in out:
                root = LinearForm(key)
                out[key] = RootDatum(root, c * sgn, root.nonnegative())
    return [out[k] for k in sorted(out, key=lambda k: (not LinearForm(k).nonnegative(), k))]


def orbit(group: Sequence[GroupElement], v: LinearForm, with_negation: bool = False) -> list[LinearForm]:
    seen = {}
    for g in group:
        u = g.act_form(v)
        seen.setdefault(u.coords, u)
        if with_negation:
            seen.setdefault((-u).coords, -u)
    return [seen[k] for k in sorted(seen)]


def weight_orbit(group: Sequence[GroupElement], w: Weight) -> list[Weight]:
    seen = {}
    for g in group:
        u = g.act_weight(w)
        seen.setdefault(u.coords, u)
    return [seen[k] for k in sorted(seen)]


# ----------------------------------------------------------------------------
# structure data
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RhoClassification:
    regular: bool
    dominant: bool
    strongly_dominant: bool
    non_integral: bool

    def as_dict(self) -> dict:
        return {"regular": self.regular, "dominant": self.dominant,
                "strongly_dominant": self.strongly_dominant, "non_integral": self.non_integral}


@dataclass(frozen=True, eq=False)
class StructureData:
    """A validated quadruple with parameters instantiated.

    ``labels[i]`` is the orbit label of ``omega_i`` (e.g. ``"r"``), and
    ``rho`` has Sigma-dual coordinates ``omega_i(rho)``.
    """

    name: str
    rank: int
    generators: tuple
    group: tuple
    roots: tuple                  # all RootDatum, positive first
    phi: tuple                    # W Sigma
    ell: LinearForm
    labels: tuple
    k_values: Mapping
    rho: Weight
    k_map: Mapping                # coords of omega in Phi u -Phi -> k_omega
    sigma1_check: tuple
    lambda1: tuple
    ambient: Mapping | None = None
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def delta_plus(self) -> list[RootDatum]:
        return [d for d in self.roots if d.positive]

    @property
    def delta(self) -> list[LinearForm]:
        return [d.root for d in self.roots]

    @property
    def phi_plus(self) -> list[LinearForm]:
        return [w for w in self.phi if w.nonnegative()]

    @property
    def positive_coroots(self) -> list[Weight]:
        return [d.coroot for d in self.delta_plus]

    def k(self, omega: LinearForm):
        return self.k_map[omega.coords]

    def basis_form(self, i: int) -> LinearForm:
        return LinearForm.basis(i, self.rank)

    def basis_weight(self, i: int) -> Weight:
        return Weight.unit(i, self.rank)

    def ell_poly(self) -> Polynomial:
        return self.ell.to_polynomial()

    def weight(self, coords: Iterable) -> Weight:
        w = Weight(tuple(coords))
        if w.rank != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {w.rank}")
        return w

    def is_invariant(self, p: Polynomial) -> bool:
        return all(p.linear_substitute(g.matrix) == p for g in self.generators)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "group_order": len(self.group),
            "ell": self.ell.to_json(),
            "labels": list(self.labels),
            "k": {k: fmt_rat(v) for k, v in sorted(self.k_values.items())},
            "rho": self.rho.to_json(),
            "delta_plus": [d.root.to_json() for d in self.delta_plus],
            "phi_plus": [w.to_json() for w in self.phi_plus],
            "lambda1": [w.to_json() for w in self.lambda1],
        }


def _label_name(label: str) -> str:
    return label.lstrip("+-±")


def assemble(name: str, generators: Sequence[GroupElement], ell: LinearForm,
             labels: Sequence[str], k_values: Mapping[str, object],
             ambient: Mapping | None = None, rank_hint: int | None = None) -> StructureData:
    """Derive Delta, Phi, k and rho from the raw quadruple and orbit parameters.

    ``labels`` gives the parameter name attached to each element of Sigma;
    the Sigma-dual coordinates of rho are the corresponding values.
    """
    r = ell.rank
    if len(labels) != r:
        raise StructureError("need one orbit label per element of Sigma")
    gens = tuple(generators)
    if any(g.rank != r for g in gens):
        raise StructureError("generator size does not match the rank")
    group = tuple(close_group(gens, rank_hint=r))
    roots = tuple(extract_roots(group))
    phi_set: dict = {}
    for i in range(r):
        for u in orbit(group, LinearForm.basis(i, r)):
            phi_set.setdefault(u.coords, u)
    phi = tuple(phi_set[k] for k in sorted(phi_set))

    kv = {}
    for lab in labels:
        nm = _label_name(lab)
        if nm not in k_values:
            raise StructureError(f"no value supplied for orbit parameter {nm!r}")
        kv[nm] = rat(k_values[nm])
    rho = Weight(tuple(kv[_label_name(lab)] for lab in labels))

    # k_omega through the +-W orbits of Sigma; equal values are the V_0 condition
    k_map: dict = {}
    for i in range(r):
        val = rho.coords[i]
        for u in orbit(group, LinearForm.basis(i, r), with_negation=True):
            old = k_map.get(u.coords)
            if old is not None and old != val:
                raise NotInV0(f"Sigma elements in one +-W orbit get different values ({old} vs {val})")
            k_map[u.coords] = val

    ellw = LinearForm(ell.coords)
    sigma1 = tuple(Weight.unit(i, r) for i in range(r) if ellw.coords[i] == 1)
    lam1: dict = {}
    for eta in sigma1:
        for u in weight_orbit(group, eta):
            lam1.setdefault(u.coords, u)
    lambda1 = tuple(lam1[k] for k in sorted(lam1, reverse=True))
    return StructureData(
        name=name, rank=r, generators=gens, group=group, roots=roots, phi=phi, ell=ellw,
        labels=tuple(labels), k_values=kv, rho=rho, k_map=k_map, sigma1_check=sigma1,
        lambda1=lambda1, ambient=ambient,
    )


def with_parameters(s: StructureData, k_values: Mapping[str, object]) -> StructureData:
    merged = dict(s.k_values)
    merged.update({k: rat(v) for k, v in k_values.items()})
    return assemble(s.name, s.generators, s.ell, s.labels, merged, s.ambient)


# ----------------------------------------------------------------------------
# ambient input
# ----------------------------------------------------------------------------

def _dot(a, b):
    return sum((rat(x) * rat(y) for x, y in zip(a, b)), ZERO)


def _match_dual(sigma, sigma_check) -> list:
    """Reorder Sigma-dual so that eta_i pairs to 1 with omega_i.

    Only a reordering is attempted; anything else is left for the duality
    check to reject."""
    r = len(sigma)
    order = []
    for i in range(r):
        hits = [j for j in range(r)
                if all(_dot(sigma[a], sigma_check[j]) == (1 if a == i else 0) for a in range(r))]
        if len(hits) != 1:
            return list(sigma_check)
        order.append(hits[0])
    if sorted(order) != list(range(r)):
        return list(sigma_check)
    return [sigma_check[j] for j in order]


def from_ambient(name: str, sigma: Sequence[Sequence], sigma_check: Sequence[Sequence],
                 ell: Sequence, generators: Sequence[Sequence[Sequence]],
                 labels: Sequence[str], k_values: Mapping[str, object],
                 extra: Mapping | None = None) -> StructureData:
    """Build from ambient data: forms are row vectors, Sigma-dual elements and
    generator matrices act on points of C^m (V may be a proper subspace)."""
    r = len(sigma)
    if len(sigma_check) != r:
        raise StructureError("Sigma and its dual must have the same size")
    sigma_check = _match_dual(sigma, sigma_check)
    for i in range(r):
        for j in range(r):
            if _dot(sigma[i], sigma_check[j]) != (1 if i == j else 0):
                raise StructureError(f"Sigma and Sigma-dual are not dual at ({i}, {j})")

    def to_form(row):
        return LinearForm(tuple(_dot(row, eta) for eta in sigma_check))

    gens = []
    for a in generators:
        m = len(a)
        # weight matrix N[i][j] = omega_i(A eta_j); forms transform by N^{-T}
        images = [[_dot(a[p], eta) for p in range(m)] for eta in sigma_check]
        for img in images:
            # the image must stay in V, i.e. be spanned by Sigma-dual
            back = [sum((_dot(sigma[i], img) * rat(sigma_check[i][p]) for i in range(r)), ZERO)
                    for p in range(m)]
            if any(rat(x) != y for x, y in zip(img, back)):
                raise StructureError("generator does not preserve V")
        nmat = [[_dot(sigma[i], images[j]) for j in range(r)] for i in range(r)]
        inv = mat_inverse(nmat)
        fm = tuple(tuple(inv[j][i] for j in range(r)) for i in range(r))
        gens.append(GroupElement(fm))
    ambient = {"sigma": [list(map(rat, row)) for row in sigma],
               "sigma_check": [list(map(rat, row)) for row in sigma_check],
               "ell": list(map(rat, ell))}
    if extra:
        ambient.update(extra)
    return assemble(name, gens, to_form(ell), labels, k_values, ambient=ambient)


def ambient_form_to_sigma(s: StructureData, row: Sequence) -> LinearForm:
    return LinearForm(tuple(_dot(row, eta) for eta in s.ambient["sigma_check"]))


def weight_to_ambient(s: StructureData, w: Weight) -> tuple:
    sc = s.ambient["sigma_check"]
    m = len(sc[0])
    return tuple(sum((w.coords[i] * sc[i][p] for i in range(s.rank)), ZERO) for p in range(m))


# ----------------------------------------------------------------------------
# rho and axioms
# ----------------------------------------------------------------------------

def poly_to_ambient(s: StructureData, p: Polynomial) -> Polynomial:
    """p as a polynomial in the ambient coordinates z_1..z_m (omega_i -> sigma_i . z)."""
    if not s.ambient:
        raise StructureError(f"{s.name} has no ambient coordinates")
    sig = s.ambient["sigma"]
    m = len(sig[0])
    images = []
    for row in sig:
        img = Polynomial.zero(m)
        for j, c in enumerate(row):
            if c:
                img = img + Polynomial.variable(j, m).scale(c)
        images.append(img)
    return p.substitute(images)


def _neg_int(x) -> bool:
    return x.denominator == 1 and x < 0


def _nonpos_int(x) -> bool:
    return x.denominator == 1 and x <= 0


def classify_rho(s: StructureData, rho: Weight | None = None) -> RhoClassification:
    rho = s.rho if rho is None else rho
    vals = [d.root(rho) for d in s.delta_plus]
    regular = all(v != 0 for v in vals)
    dominant = not any(_neg_int(v) for v in vals)
    strong = regular and dominant
    if strong:
        for w in s.phi_plus:
            v, k = w(rho), s.k(w)
            if _neg_int(v - k) or _nonpos_int(v + k):
                strong = False
                break
    non_integral = all(d.root(rho).denominator != 1 for d in s.roots)
    return RhoClassification(regular, dominant, strong, non_integral)


@dataclass
class AxiomResult:
    passed: bool
    witness: str = ""


@dataclass
class AxiomReport:
    results: dict
    c0_degree_bound: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def lines(self) -> list[str]:
        out = []
        for name, res in self.results.items():
            status = "pass" if res.passed else "FAIL"
            extra = f"  ({res.witness})" if res.witness else ""
            out.append(f"{name:4s} {status}{extra}")
        return out

    def to_json(self) -> dict:
        return {"c0_degree_bound": self.c0_degree_bound,
                "axioms": {k: {"pass": v.passed, "witness": v.witness} for k, v in self.results.items()}}


AXIOM_ORDER = ("C11", "C1", "C2", "C3''", "C3", "C3'", "C4", "C5", "C0")


def invariant_linear_forms(s: StructureData) -> list[LinearForm]:
    r = s.rank
    rows = []
    for g in s.generators:
        for i in range(r):
            rows.append([g.matrix[i][j] - (1 if i == j else 0) for j in range(r)])
    return [LinearForm(v) for v in nullspace(rows, r)]


def check_axioms(s: StructureData, c0_degree_bound: int = 3) -> AxiomReport:
    res: dict = {}
    r = s.rank

    # C11
    bad = []
    for idx, g in enumerate(s.generators):
        if g.is_identity() or not (g * g).is_identity() or g.minus_identity_rank() != 1:
            bad.append(idx)
    if bad:
        res["C11"] = AxiomResult(False, f"generator {bad[0]} is not a reflection")
    else:
        refl = [g for g in s.group if not g.is_identity() and (g * g).is_identity()
                and g.minus_identity_rank() == 1]
        sub = close_group(refl, rank_hint=r)
        ok = len(sub) == len(s.group)
        res["C11"] = AxiomResult(ok, f"|W|={len(s.group)}, reflections={len(refl)}")

    # C1
    plus = {d.root.coords for d in s.delta_plus}
    allr = {d.root.coords for d in s.roots}
    sym = plus | {tuple(-x for x in a) for a in plus}
    odd = sorted(allr - sym)
    res["C1"] = AxiomResult(not odd and sym == allr,
                            f"root {LinearForm(odd[0])!r} neither positive nor negative" if odd
                            else f"|Delta+|={len(plus)}")

    # C2
    pp = {w.coords for w in s.phi_plus}
    both = pp | {tuple(-x for x in a) for a in pp}
    stray = [w for w in s.phi if w.coords not in both]
    res["C2"] = AxiomResult(not stray, f"{stray[0]!r} has mixed signs" if stray
                            else f"|Phi|={len(s.phi)}, |Phi+|={len(pp)}")

    # C3''
    moved = [i for i, g in enumerate(s.generators) if g.act_form(s.ell) != s.ell]
    res["C3''"] = AxiomResult(not moved, f"generator {moved[0]} moves ell" if moved else "")

    # C3
    tot = LinearForm((0,) * r)
    for w in s.phi_plus:
        tot = tot + w
    for d in s.delta_plus:
        tot = tot - d.root
    res["C3"] = AxiomResult(tot == s.ell, f"sum Phi+ - sum Delta+ = {tot.to_json()}, ell = {s.ell.to_json()}")

    # C3'
    neg = [i for i in range(r) if not s.ell.coords[i] > 0]
    res["C3'"] = AxiomResult(not neg, f"ell(eta_{neg[0] + 1}) = {fmt_rat(s.ell.coords[neg[0]])}" if neg
                             else "ell(eta_i) = " + ",".join(fmt_rat(c) for c in s.ell.coords))

    # C4
    viol = None
    forms = s.delta + list(s.phi)
    for eta in s.sigma1_check:
        for w in forms:
            if abs(w(eta)) > 1:
                viol = (w, eta)
                break
        if viol:
            break
    res["C4"] = AxiomResult(viol is None, f"{viol[0]!r} on {viol[1]!r}" if viol
                            else f"|Sigma1|={len(s.sigma1_check)}")

    # C5: restriction of invariant linear forms to Sigma1-dual is injective
    inv = invariant_linear_forms(s)
    mat = [[f(eta) for eta in s.sigma1_check] for f in inv]
    rk = rank(mat) if mat and s.sigma1_check else 0
    res["C5"] = AxiomResult(rk == len(inv), f"dim invariants={len(inv)}, rank on Sigma1={rk}")

    # C0, constructively up to the bound
    res["C0"] = _check_c0(s, c0_degree_bound)
    return AxiomReport(res, c0_degree_bound)


def _check_c0(s: StructureData, bound: int) -> AxiomResult:
    from .exact import SingularSystem
    from .interp import DimensionMismatch, interpolate_p
    from .lattice import enumerate_lambda_plus

    cls = classify_rho(s)
    if not (cls.regular and cls.dominant):
        return AxiomResult(False, "rho is not regular dominant")
    if any(c <= 0 for c in s.ell.coords):
        return AxiomResult(False, "ell is not positive on Sigma-dual; degrees unbounded")
    count = 0
    for lam in enumerate_lambda_plus(s, bound):
        try:
            p = interpolate_p(s, lam)
        except (SingularSystem, DimensionMismatch) as exc:
            return AxiomResult(False, f"lambda={lam.to_json()}: {exc}")
        if p.poly.degree() != s.ell(lam):
            return AxiomResult(False, f"lambda={lam.to_json()}: degree {p.poly.degree()} != ell")
        count += 1
    return AxiomResult(True, f"verified {count} polynomials up to ell-degree {bound}")


__all__ = [
    "GroupElement", "RootDatum", "StructureData", "RhoClassification", "AxiomReport", "AxiomResult",
    "StructureError", "GroupTooLarge", "NotAReflection", "NotInV0",
    "close_group", "extract_roots", "reflection_root", "orbit", "weight_orbit", "classify_rho",
    "check_axioms", "assemble", "from_ambient", "with_parameters", "invariant_linear_forms",
    "ambient_form_to_sigma", "weight_to_ambient", "poly_to_ambient", "AXIOM_ORDER", "DEFAULT_GROUP_BOUND",
]
