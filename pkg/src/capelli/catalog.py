"""Tabulated structure families in ambient coordinates.

Each family is a declarative record: Sigma as ambient row vectors, its dual
basis, ell, generating reflections acting on points of C^m, the orbit labels
of Sigma, the listed positive roots and Phi+, and the rho row as a function of
the orbit parameters. ``build_case`` converts to Sigma-coordinates and checks
the derived data against the listed data.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .exact import LinearForm, fmt_rat, primitive_integer_vector, rat
from .structure import (
    NotInV0, StructureData, StructureError, ambient_form_to_sigma, classify_rho, from_ambient, orbit,
    weight_to_ambient,
)

HALF = Fraction(1, 2)
CASE_IDS = ("I", "II", "III", "IVa", "IVb", "IVc", "V", "VIa", "VIb")
DEFAULT_K = ("1/3", "1/5", "1/7", "1/11", "1/13", "1/17", "1/19", "1/23")


class InvalidCaseParams(ValueError):
    pass


class OrbitMismatch(StructureError):
    pass


class TableMismatch(StructureError):
    pass


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    size_params: Mapping = field(default_factory=dict)
    k_params: Mapping = field(default_factory=dict)


@dataclass
class CaseData:
    m: int
    sigma: list
    sigma_check: list
    ell: list
    generators: list
    labels: list | None
    delta_plus: list
    phi_plus: list
    rho_row: Callable | None
    notes: str = ""


# ----------------------------------------------------------------------------
# ambient helpers
# ----------------------------------------------------------------------------

def _vec(m, entries: Mapping[int, object]) -> list:
    """Ambient vector from 1-based {index: value}."""
    v = [Fraction(0)] * m
    for i, c in entries.items():
        v[i - 1] += Fraction(c)
    return v


def _diff(m, i, j, sj=1):
    return _vec(m, {i: 1, j: -sj}) if i != j else _vec(m, {i: 1 - sj})


def _partial(m, k):
    return _vec(m, {i: 1 for i in range(1, k + 1)})


def _perm_matrix(m, images: Mapping[int, tuple]) -> list:
    """Signed permutation acting on points: e_i -> sign * e_j for {i: (j, sign)}."""
    a = [[0] * m for _ in range(m)]
    for i in range(1, m + 1):
        j, sg = images.get(i, (i, 1))
        a[j - 1][i - 1] = sg
    return a


def _swap(m, i, j):
    return _perm_matrix(m, {i: (j, 1), j: (i, 1)})


def _flip(m, i):
    return _perm_matrix(m, {i: (i, -1)})


def _dswap(m, i, j):
    """(z_i, z_j) -> (-z_j, -z_i)."""
    return _perm_matrix(m, {i: (j, -1), j: (i, -1)})


def _coef_vec(coefs) -> list:
    return [Fraction(c) for c in coefs]


# ----------------------------------------------------------------------------
# the families
# ----------------------------------------------------------------------------

def _case_I(n: int) -> CaseData:
    m = n
    sigma = [_diff(m, i, i + 1) for i in range(1, n)] + [_vec(m, {n: 1})]
    sc = [_partial(m, k) for k in range(1, n + 1)]
    ell = _vec(m, {i: 1 for i in range(1, n + 1)})
    gens = [_swap(m, i, i + 1) for i in range(1, n)]
    dplus = [_diff(m, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    pplus = dplus + [_vec(m, {i: 1}) for i in range(1, n + 1)]
    labels = ["±r"] * (n - 1) + ["s"]

    def rho(k):
        return [(n - i) * k.get("r", 0) + k["s"] for i in range(1, n + 1)]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "GL_p x GL_q on C^p (x) C^q: n=p, r=1, s=(q-p+1)/2")


def _case_II(n: int) -> CaseData:
    m = n
    sigma = [_diff(m, i, i + 1) for i in range(1, n)] + [_vec(m, {n: 1})]
    sc = [_partial(m, k) for k in range(1, n + 1)]
    ell = _vec(m, {i: 1 for i in range(1, n + 1, 2)})
    gens = [_swap(m, i, i + 2) for i in range(1, n - 1)]
    dplus = [_diff(m, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (j - i) % 2 == 0]
    pplus = [_diff(m, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (j - i) % 2 == 1]
    pplus += [_vec(m, {i: 1}) for i in range(1, n + 1) if (n - i) % 2 == 0]
    labels = ["r" if i % 2 == 0 else "-r" for i in range(n - 1)] + ["s"]

    def rho(k):
        return [(n - i) * k["r"] + k["s"] for i in range(1, n + 1)]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "GL_p x GL_q on (C^p (x) C^q) + C^q")


def _case_III(n: int) -> CaseData:
    if n % 2 == 1:
        m = n + 1
        sigma = [_diff(m, i, i + 1) for i in range(1, n + 1)]
        sc = [_partial(m, k) for k in range(1, n)] + [_vec(m, {n + 1: -1})]
        ell = _vec(m, {i: (2 if i % 2 else -1) for i in range(1, m + 1)})
        gens = [_swap(m, i, i + 2) for i in range(1, m - 1) if n not in (i, i + 2)]

        def zn(v):
            v = list(v)
            v[n - 1] = Fraction(0)
            return v

        dplus = [_diff(m, i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)
                 if (j - i) % 2 == 0 and n not in (i, j)]
        pplus = [zn(_diff(m, i, j)) for i in range(1, m + 1) for j in range(i + 1, m + 1) if (j - i) % 2 == 1]
        labels = ["r" if i % 2 == 0 else "-r" for i in range(n - 2)] + ["s", "-s"]

        def rho(k):
            return [(n - 1 - i) * k["r"] + k["s"] for i in range(1, n)] + [Fraction(0), -k["s"]]
    else:
        m = n
        sigma = [_diff(m, i, i + 1) for i in range(1, n)] + [_vec(m, {n - 1: 1})]
        sc = [_partial(m, k) for k in range(1, n - 1)] + [_vec(m, {n: -1}), _partial(m, n)]
        ell = _vec(m, {i: (2 if i % 2 else -1) for i in range(1, m + 1)})
        gens = [_swap(m, i, i + 2) for i in range(1, n - 1)]
        dplus = [_diff(m, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (j - i) % 2 == 0]
        pplus = [_diff(m, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (j - i) % 2 == 1]
        pplus += [_vec(m, {i: 1}) for i in range(1, n + 1, 2)]
        labels = ["r" if i % 2 == 0 else "-r" for i in range(n - 1)] + ["s"]

        def rho(k):
            return [(n - 1 - i) * k["r"] + k["s"] for i in range(1, n)] + [-k["r"] + k["s"]]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "GL_p x GL_q on (C^p (x) C^q) + (C^q)^*")


def _case_IVa() -> CaseData:
    m = 7
    h = HALF
    sigma = [_diff(m, 1, 2), _diff(m, 2, 3), _diff(m, 3, 4), _diff(m, 4, 5), _diff(m, 5, 6),
             _vec(m, {4: 1, 6: 1})]
    sc = [_coef_vec(v) for v in [
        (1, 0, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0, -1), (1, 1, 1, 0, 0, 0, -1),
        (h, h, h, h, -h, -h, -h), (h, h, h, h, h, -h, -h), (h, h, h, h, h, h, Fraction(-3, 2))]]
    ell = _vec(m, {1: 2, 3: 2, 5: 2})
    gens = [_swap(m, 1, 3), _swap(m, 3, 5), _swap(m, 2, 4), _swap(m, 4, 6), _swap(m, 6, 7)]
    dplus = [_diff(m, i, j) for i, j in [(1, 3), (1, 5), (3, 5), (2, 4), (2, 6), (2, 7), (4, 6), (4, 7), (6, 7)]]
    pplus = []
    for i in (1, 3, 5):
        for j in (2, 4, 6, 7):
            sg = 1 if j > i else -1
            pplus.append([sg * x for x in _diff(m, i, j)])
    pplus += [_vec(m, {i: 1, j: 1}) for i, j in [(2, 4), (2, 6), (4, 6)]]
    labels = ["r", "-r", "r", "-r", "r", "±s"]

    def rho(k):
        r, s = k["r"], k["s"]
        return [s / 2 + 4 * r, s / 2 + 3 * r, s / 2 + 2 * r, s / 2 + r, s / 2, s / 2 - r, -3 * s / 2 - 3 * r]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "Sp_2p x GL_3 on C^2p (x) C^3: r=1/2, s=p-2")


def _case_IVb() -> CaseData:
    m = 6
    h = HALF
    sigma = [_vec(m, {1: h, 2: -h, 4: -h, 6: -h}), _diff(m, 2, 3), _diff(m, 3, 4), _diff(m, 4, 5),
             _diff(m, 5, 6), _vec(m, {5: 1, 6: 1})]
    sc = [_coef_vec(v) for v in [
        (2, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0), (1, 1, 1, 0, 0, 0), (2, 1, 1, 1, 0, 0),
        (Fraction(3, 2), h, h, h, h, h), (h, h, h, h, h, -h)]]
    ell = _vec(m, {1: 2})
    gens = [_swap(m, 2, 4), _swap(m, 4, 6), _dswap(m, 4, 6), _swap(m, 3, 5), _flip(m, 5)]
    dplus = []
    for i, j in [(2, 4), (2, 6), (4, 6)]:
        dplus += [_diff(m, i, j), _vec(m, {i: 1, j: 1})]
    dplus += [_diff(m, 3, 5), _vec(m, {3: 1, 5: 1}), _vec(m, {3: 2}), _vec(m, {5: 2})]
    pplus = []
    for i in range(2, 7):
        for j in range(i + 1, 7):
            if (j - i) % 2 == 1:
                pplus += [_diff(m, i, j), _vec(m, {i: 1, j: 1})]
    for signs in itertools.product((1, -1), repeat=3):
        if signs.count(-1) in (1, 3):
            pplus.append(_vec(m, {1: h, 2: h * signs[0], 4: h * signs[1], 6: h * signs[2]}))
    labels = ["s", "±r", "±r", "±r", "±r", "±r"]

    def rho(k):
        r, s = k["r"], k["s"]
        return [2 * s + 6 * r, 4 * r, 3 * r, 2 * r, r, Fraction(0)]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "Sp_4 x GL_p on C^4 (x) C^p: r=1/2, s=(p-3)/2")


def _case_IVc() -> CaseData:
    m = 5
    h = HALF
    sigma = [_diff(m, 1, 2), _diff(m, 2, 3), _diff(m, 3, 4), _diff(m, 4, 5), _vec(m, {4: 1, 5: 1})]
    sc = [_coef_vec(v) for v in [(1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, 1, 1, 0, 0), (h, h, h, h, h),
                                 (h, h, h, h, -h)]]
    ell = _vec(m, {1: 2, 3: 2, 5: 2})
    gens = [_swap(m, 1, 3), _swap(m, 3, 5), _swap(m, 2, 4), _flip(m, 4)]
    dplus = [_diff(m, i, j) for i, j in [(1, 3), (1, 5), (3, 5)]]
    dplus += [_diff(m, 2, 4), _vec(m, {2: 1, 4: 1}), _vec(m, {2: 2}), _vec(m, {4: 2})]
    pplus = []
    for i in range(1, 6):
        for j in range(i + 1, 6):
            if (j - i) % 2 == 1:
                pplus += [_diff(m, i, j), _vec(m, {i: 1, j: 1})]
    labels = ["r", "-r", "r", "-r", "r"]

    def rho(k):
        r = k["r"]
        return [4 * r, 3 * r, 2 * r, r, Fraction(0)]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "Sp_4 x GL_3 on C^4 (x) C^3: r=1/2")


def _case_V(a: int, b: int) -> CaseData:
    m = a + b + 1
    z = lambda i: i                  # noqa: E731  z_1..z_a
    zp = lambda i: a + i             # noqa: E731  z'_1..z'_b
    zpp = m
    h = HALF
    sigma = [_diff(m, z(i), z(i + 1)) for i in range(1, a)]
    sigma += [_diff(m, zp(i), zp(i + 1)) for i in range(1, b)]
    sigma += [_vec(m, {z(a): 1, zp(b): 1, zpp: -1}), _vec(m, {z(a): 1, zp(b): -1, zpp: 1}),
              _vec(m, {z(a): -1, zp(b): 1, zpp: 1})]
    sc = [_vec(m, {z(i): 1 for i in range(1, k + 1)}) for k in range(1, a)]
    sc += [_vec(m, {zp(i): 1 for i in range(1, k + 1)}) for k in range(1, b)]
    all_e = {z(i): h for i in range(1, a + 1)}
    all_ep = {zp(i): h for i in range(1, b + 1)}
    sc += [_vec(m, {**all_e, **all_ep}), _vec(m, {**all_e, zpp: h}), _vec(m, {**all_ep, zpp: h})]
    ell = _vec(m, {z(1): 2, zp(1): 2})
    gens = [_flip(m, z(i)) for i in range(2, a + 1)] + [_flip(m, zp(i)) for i in range(2, b + 1)] + [_flip(m, zpp)]
    dplus = [_vec(m, {z(i): 2}) for i in range(2, a + 1)] + [_vec(m, {zp(i): 2}) for i in range(2, b + 1)]
    dplus += [_vec(m, {zpp: 2})]
    pplus = []
    for i in range(1, a):
        pplus += [_diff(m, z(i), z(i + 1)), _vec(m, {z(i): 1, z(i + 1): 1})]
    for i in range(1, b):
        pplus += [_diff(m, zp(i), zp(i + 1)), _vec(m, {zp(i): 1, zp(i + 1): 1})]
    for signs in itertools.product((1, -1), repeat=3):
        if signs.count(-1) <= 1:
            pplus.append(_vec(m, {z(a): signs[0], zp(b): signs[1], zpp: signs[2]}))
    if a > b == 1:
        labels = ["r1"] + [f"±r{i}" for i in range(2, a)] + ["s", "-s", "s"]
    elif b > 1:
        labels = ["r1"] + [f"±r{i}" for i in range(2, a)] + ["r1'"] + [f"±r{i}'" for i in range(2, b)]
        labels += ["±s", "±s", "±s"]
    else:
        labels = None
    rho = None
    if a > b:
        def rho(k):
            rs = [k[f"r{i}"] for i in range(1, a)]
            rps = [k[f"r{i}'"] for i in range(1, b)]
            s = k["s"]
            row = [sum(rs[i - 1:], Fraction(0)) + s for i in range(1, a)] + [s]
            row += [sum(rps[i - 1:], Fraction(0)) + s for i in range(1, b)] + [s]
            return row + [s]
    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "two-sided Sp/GL/SL chains; see the realization rows")


def _case_VIa() -> CaseData:
    m = 3
    h = HALF
    sigma = [_diff(m, 1, 2), _diff(m, 2, 3), _vec(m, {3: 2})]
    sc = [_coef_vec(v) for v in [(1, 0, 0), (1, 1, 0), (h, h, h)]]
    ell = _vec(m, {1: 2})
    gens = [_flip(m, 2), _flip(m, 3)]
    dplus = [_vec(m, {2: 2}), _vec(m, {3: 2})]
    pplus = [_diff(m, 1, 2), _vec(m, {1: 1, 2: 1}), _diff(m, 2, 3), _vec(m, {2: 1, 3: 1}), _vec(m, {3: 2})]
    labels = ["r", "±s", "±t"]

    def rho(k):
        r, s, t = k["r"], k["s"], k["t"]
        return [r + s + t / 2, s + t / 2, t / 2]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "Sp_2p x GL_2 on C^2p (x) C^2: r=1/2, s=p-1, t=1")


def _case_VIb() -> CaseData:
    m = 4
    h = HALF
    sigma = [_diff(m, 1, 2), _diff(m, 2, 3), _diff(m, 3, 4), _vec(m, {3: 1, 4: 1})]
    sc = [_coef_vec(v) for v in [(1, 0, 0, 0), (1, 1, 0, 0), (h, h, h, h), (h, h, h, -h)]]
    ell = _vec(m, {1: 2})
    gens = [_flip(m, 2), _flip(m, 3)]
    dplus = [_vec(m, {2: 2}), _vec(m, {3: 2})]
    pplus = [_diff(m, 1, 2), _vec(m, {1: 1, 2: 1}), _diff(m, 2, 3), _vec(m, {2: 1, 3: 1}),
             _diff(m, 3, 4), _vec(m, {3: 1, 4: 1})]
    labels = ["r", "±s", "t", "-t"]

    def rho(k):
        r, s, t = k["r"], k["s"], k["t"]
        return [r + s + t, s + t, t, Fraction(0)]

    return CaseData(m, sigma, sc, ell, gens, labels, dplus, pplus, rho,
                    "Sp_2p x C* x C* on C^2p + C^2p: r=1/2, s=p-1, t=1/2")


# ----------------------------------------------------------------------------
# registry
# ----------------------------------------------------------------------------

_CONSTRAINTS = {
    "I": ("1 <= n", ("n",)),
    "II": ("3 <= n", ("n",)),
    "III": ("3 <= n", ("n",)),
    "IVa": ("", ()),
    "IVb": ("", ()),
    "IVc": ("", ()),
    "V": ("1 <= b <= a <= 3", ("a", "b")),
    "VIa": ("", ()),
    "VIb": ("", ()),
}

_ORBIT_LABELS = {
    "I": "[±R,...,±R,S]",
    "II": "[R,-R,R,...,S]",
    "III": "odd: [R,-R,...,R,S,-S]; even: [R,-R,...,R,S]",
    "IVa": "[R,-R,R,-R,R,±S]",
    "IVb": "[S,±R,±R,±R,±R,±R]",
    "IVc": "[R,-R,R,-R,R]",
    "V": "a>b=1: [R1,±R2,...,S,-S,S]; a>=b>1: [R1,±R2,...,R1',±R2',...,±S,±S,±S]",
    "VIa": "[R,±S,±T]",
    "VIb": "[R,±S,T,-T]",
}


def list_cases() -> list[dict]:
    return [{"case": cid, "constraint": _CONSTRAINTS[cid][0],
             "size_params": list(_CONSTRAINTS[cid][1]), "orbits": _ORBIT_LABELS[cid]}
            for cid in CASE_IDS]


def case_data(case_id: str, size: Mapping | None = None) -> CaseData:
    size = dict(size or {})
    if case_id not in CASE_IDS:
        raise InvalidCaseParams(f"unknown case {case_id!r}; expected one of {', '.join(CASE_IDS)}")
    needed = _CONSTRAINTS[case_id][1]
    extra = set(size) - set(needed)
    if extra:
        raise InvalidCaseParams(f"case {case_id} takes no size parameter {sorted(extra)}")
    missing = [p for p in needed if size.get(p) is None]
    if missing:
        raise InvalidCaseParams(f"case {case_id} needs size parameter(s) {missing}")
    vals = {k: int(v) for k, v in size.items()}
    if case_id == "I":
        if vals["n"] < 1:
            raise InvalidCaseParams("case I needs 1 <= n")
        return _case_I(vals["n"])
    if case_id == "II":
        if vals["n"] < 3:
            raise InvalidCaseParams("case II needs 3 <= n")
        return _case_II(vals["n"])
    if case_id == "III":
        if vals["n"] < 3:
            raise InvalidCaseParams("case III needs 3 <= n")
        return _case_III(vals["n"])
    if case_id == "V":
        a, b = vals["a"], vals["b"]
        if not (1 <= b <= a <= 3):
            raise InvalidCaseParams("case V needs 1 <= b <= a <= 3")
        return _case_V(a, b)
    return {"IVa": _case_IVa, "IVb": _case_IVb, "IVc": _case_IVc,
            "VIa": _case_VIa, "VIb": _case_VIb}[case_id]()


def derive_labels(s_like_group, r: int) -> list[str]:
    """Orbit labels read off from the +-W orbits of Sigma (names o1, o2, ...)."""
    labels: list = [None] * r
    count = 0
    for i in range(r):
        if labels[i] is not None:
            continue
        count += 1
        name = f"o{count}"
        base = LinearForm.basis(i, r)
        w_orbit = {u.coords for u in orbit(s_like_group, base)}
        pm = tuple(-x for x in base.coords) in w_orbit
        labels[i] = ("±" if pm else "") + name
        for j in range(i + 1, r):
            bj = LinearForm.basis(j, r)
            if bj.coords in w_orbit:
                labels[j] = ("±" if pm else "") + name
            elif tuple(-x for x in bj.coords) in w_orbit:
                labels[j] = ("±" if pm else "-") + name
    return labels


def _label_parts(lab: str) -> tuple[str, str]:
    if lab.startswith("±"):
        return "±", lab[1:]
    if lab.startswith("-"):
        return "-", lab[1:]
    return "+", lab.lstrip("+")


def check_orbit_labels(s: StructureData) -> None:
    """Compare the listed orbit labels with the +-W orbits of Sigma."""
    r = s.rank
    worb = [{u.coords for u in orbit(s.group, LinearForm.basis(i, r))} for i in range(r)]
    for i in range(r):
        si, ni = _label_parts(s.labels[i])
        neg_i = tuple(-x for x in LinearForm.basis(i, r).coords)
        if (si == "±") != (neg_i in worb[i]):
            raise OrbitMismatch(f"label {s.labels[i]!r} of omega_{i + 1} disagrees with -omega in W omega")
        for j in range(r):
            if i == j:
                continue
            sj, nj = _label_parts(s.labels[j])
            bj = LinearForm.basis(j, r).coords
            negj = tuple(-x for x in bj)
            same = bj in worb[i] or negj in worb[i]
            if same != (ni == nj):
                raise OrbitMismatch(f"omega_{i + 1} and omega_{j + 1}: labels {s.labels[i]!r}, {s.labels[j]!r} "
                                    "disagree with the +-W orbits")
            if same and "±" not in (si, sj):
                if (si == sj) != (bj in worb[i]):
                    raise OrbitMismatch(f"sign of omega_{j + 1} relative to omega_{i + 1} disagrees")


def _form_set(s: StructureData, rows) -> set:
    out = set()
    for row in rows:
        f = ambient_form_to_sigma(s, row)
        out.add(primitive_integer_vector(f.coords) if f.is_integral() and not f.is_zero()
                else tuple(f.coords))
    return out


def cross_check_tables(s: StructureData, cd: CaseData, k: Mapping) -> None:
    dp = _form_set(s, cd.delta_plus)
    got = {d.root.coords for d in s.delta_plus}
    if dp != {tuple(int(x) for x in c) for c in got}:
        raise TableMismatch(f"{s.name}: listed Delta+ differs from the derived positive roots")
    pp = {tuple(ambient_form_to_sigma(s, row).coords) for row in cd.phi_plus}
    if pp != {w.coords for w in s.phi_plus}:
        raise TableMismatch(f"{s.name}: listed Phi+ differs from W Sigma restricted to Phi+")
    if cd.rho_row is not None:
        want = [rat(x) for x in cd.rho_row({n: Fraction(int(v.numerator), int(v.denominator))
                                             for n, v in k.items()})]
        got_rho = list(weight_to_ambient(s, s.rho))
        if want != got_rho:
            raise TableMismatch(f"{s.name}: rho row {[fmt_rat(x) for x in want]} "
                                f"!= {[fmt_rat(x) for x in got_rho]}")


def _size_name(case_id: str, size: Mapping) -> str:
    if not size:
        return case_id
    return case_id + "(" + ",".join(f"{k}={size[k]}" for k in sorted(size)) + ")"


def _normalize_k(k: Mapping | None) -> dict:
    out = {}
    for key, v in (k or {}).items():
        key = key.strip()
        if key.endswith("p") and key[:-1][-1:].isdigit():
            key = key[:-1] + "'"     # r1p is accepted for r1'
        out[key] = rat(v)
    return out


def build_case(spec: CaseSpec | str, size: Mapping | None = None, k: Mapping | None = None,
               *, cross_check: bool = True) -> StructureData:
    """Build a tabulated structure in Sigma-coordinates."""
    if isinstance(spec, CaseSpec):
        case_id, size, k = spec.case_id, dict(spec.size_params), dict(spec.k_params)
    else:
        case_id = spec
    size = dict(size or {})
    kparams = _normalize_k(k)
    cd = case_data(case_id, size)
    name = _size_name(case_id, size)

    labels = cd.labels
    if labels is None:
        # V with a = b = 1: derive labels from the orbit structure
        probe = from_ambient(name, cd.sigma, cd.sigma_check, cd.ell, cd.generators,
                             [f"x{i}" for i in range(len(cd.sigma))],
                             {f"x{i}": 0 for i in range(len(cd.sigma))})
        labels = derive_labels(probe.group, probe.rank)
    names = []
    for lab in labels:
        nm = _label_parts(lab)[1]
        if nm not in names:
            names.append(nm)
    if case_id == "V" and size.get("a") == size.get("b"):
        missing = [nm for nm in names if nm not in kparams]
        if missing:
            raise InvalidCaseParams(f"case V with a = b has no tabulated rho; supply {missing} explicitly")
    unknown = set(kparams) - set(names)
    if unknown:
        raise InvalidCaseParams(f"unknown orbit parameter(s) {sorted(unknown)} for {name}; expected {names}")
    kv = {}
    for idx, nm in enumerate(names):
        kv[nm] = kparams.get(nm, rat(DEFAULT_K[idx % len(DEFAULT_K)]))
    s = from_ambient(name, cd.sigma, cd.sigma_check, cd.ell, cd.generators, labels, kv,
                     extra={"notes": cd.notes, "m": cd.m})
    check_orbit_labels(s)
    if cross_check:
        cross_check_tables(s, cd, kv)
    return s


def parse_k(text: str | None) -> dict:
    """``"r=1,s=1/2"`` -> {"r": 1, "s": 1/2}."""
    out = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad parameter assignment {part!r}; expected name=value")
        key, val = part.split("=", 1)
        out[key.strip()] = rat(val.strip())
    return out


# geometric parameter choices taken from the realization rows
GEOMETRIC = {
    ("I", (("n", 2),)): {"r": 1, "s": "1/2"},
    ("I", (("n", 3),)): {"r": 1, "s": "1/2"},
    ("II", (("n", 3),)): {"r": "1/2", "s": "1/2"},
    ("III", (("n", 3),)): {"r": "1/2", "s": "1/2"},
    ("IVc", ()): {"r": "1/2"},
    ("VIa", ()): {"r": "1/2", "s": 1, "t": 1},
    ("VIb", ()): {"r": "1/2", "s": 1, "t": "1/2"},
    ("V", (("a", 2), ("b", 1))): {"r1": "1/2", "s": "1/2"},
}

DESK_CASES = [
    ("I", {"n": 2}), ("I", {"n": 3}), ("II", {"n": 3}), ("III", {"n": 3}),
    ("IVc", {}), ("VIa", {}), ("VIb", {}), ("V", {"a": 2, "b": 1}),
]


def geometric_params(case_id: str, size: Mapping) -> dict:
    return dict(GEOMETRIC[(case_id, tuple(sorted(size.items())))])


def generic_params(case_id: str, size: Mapping) -> dict:
    cd = case_data(case_id, size)
    names = []
    for lab in cd.labels or []:
        nm = _label_parts(lab)[1]
        if nm not in names:
            names.append(nm)
    # slide along DEFAULT_K until rho is strongly dominant and non-integral
    for off in range(len(DEFAULT_K) - len(names) + 1):
        params = {nm: DEFAULT_K[off + i] for i, nm in enumerate(names)}
        try:
            s = build_case(case_id, size, params, cross_check=False)
        except (NotInV0, InvalidCaseParams):
            continue
        c = classify_rho(s)
        if c.strongly_dominant and c.non_integral:
            return params
    return {nm: DEFAULT_K[i] for i, nm in enumerate(names)}


# ----------------------------------------------------------------------------
# custom structure files
# ----------------------------------------------------------------------------

_FILE_FIELDS = {"name", "ambient_dim", "sigma", "sigma_check", "ell", "generators", "labels",
                "k", "rho_params", "delta_plus", "phi_plus"}


def structure_from_document(doc: Mapping, name: str = "custom") -> StructureData:
    """Build from a parsed structure document (see README for the fields)."""
    unknown = set(doc) - _FILE_FIELDS
    if unknown:
        raise StructureError(f"unknown field(s) {sorted(unknown)} in structure file")
    for key in ("ambient_dim", "sigma", "sigma_check", "ell", "generators"):
        if key not in doc:
            raise StructureError(f"structure file is missing {key!r}")
    m = int(doc["ambient_dim"])
    sigma = [[rat(x) for x in row] for row in doc["sigma"]]
    check = [[rat(x) for x in row] for row in doc["sigma_check"]]
    ell = [rat(x) for x in doc["ell"]]
    gens = [[[rat(x) for x in row] for row in g] for g in doc["generators"]]
    rows = sigma + check + [ell] + [row for g in gens for row in g]
    if any(len(row) != m for row in rows) or any(len(g) != m for g in gens):
        raise StructureError(f"every ambient vector and matrix must have size {m}")
    name = str(doc.get("name", name))
    labels = doc.get("labels")
    if labels is None:
        probe = from_ambient(name, sigma, check, ell, gens, [f"x{i}" for i in range(len(sigma))],
                             {f"x{i}": 0 for i in range(len(sigma))})
        labels = derive_labels(probe.group, probe.rank)
    labels = [str(x).replace("+-", "±") for x in labels]
    k = {str(a): rat(b) for a, b in (doc.get("k") or {}).items()}
    rho = {str(a): rat(b) for a, b in (doc.get("rho_params") or {}).items()}
    for key in set(k) & set(rho):
        if k[key] != rho[key]:
            raise StructureError(f"k and rho_params disagree on {key!r}")
    values = {**rho, **k}
    s = from_ambient(name, sigma, check, ell, gens, labels, values, extra={"m": m})
    check_orbit_labels(s)
    if "delta_plus" in doc or "phi_plus" in doc:
        cd = CaseData(m, sigma, check, ell, gens, labels,
                      doc.get("delta_plus", [_ambient_row(s, d.root) for d in s.delta_plus]),
                      doc.get("phi_plus", [_ambient_row(s, w) for w in s.phi_plus]), None)
        cross_check_tables(s, cd, values)
    return s


def _ambient_row(s: StructureData, form: LinearForm) -> list:
    # omega = sum_i c_i omega_i, and omega_i is the ambient row sigma[i]
    sig = s.ambient["sigma"]
    return [sum((c * sig[i][p] for i, c in enumerate(form.coords)), rat(0)) for p in range(len(sig[0]))]


def load_structure_file(path: str) -> StructureData:
    """Read a YAML or JSON structure document."""
    import yaml

    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, Mapping):
        raise StructureError(f"{path}: expected a mapping at the top level")
    # yaml reads 1/2 as a string, which rat() accepts
    return structure_from_document(doc, name=doc.get("name", path))


# ----------------------------------------------------------------------------
# isomorphisms between structures
# ----------------------------------------------------------------------------

def find_isomorphism(s1: StructureData, s2: StructureData) -> tuple | None:
    """A permutation ``p`` of Sigma with ell and W matching, or None.

    ``p[i] = j`` sends omega_i of ``s1`` to omega_j of ``s2``.
    """
    if s1.rank != s2.rank or len(s1.group) != len(s2.group):
        return None
    r = s1.rank
    g2 = {g.matrix for g in s2.group}
    for p in itertools.permutations(range(r)):
        if any(s1.ell.coords[i] != s2.ell.coords[p[i]] for i in range(r)):
            continue
        ok = True
        for g in s1.generators:
            m = [[0] * r for _ in range(r)]
            for i in range(r):
                for j in range(r):
                    m[p[i]][p[j]] = g.matrix[i][j]
            if tuple(tuple(row) for row in m) not in g2:
                ok = False
                break
        if ok:
            return p
    return None


__all__ = [
    "CASE_IDS", "CaseSpec", "CaseData", "InvalidCaseParams", "OrbitMismatch", "TableMismatch",
    "build_case", "list_cases", "case_data", "parse_k", "derive_labels", "check_orbit_labels",
    "cross_check_tables", "find_isomorphism", "GEOMETRIC", "DESK_CASES", "geometric_params",
    "generic_params", "DEFAULT_K", "structure_from_document", "load_structure_file",
]
