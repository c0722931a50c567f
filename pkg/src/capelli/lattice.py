"""Enumeration on Lambda_+, Lambda and Lambda_1: graded points, monoid
membership, paths, the order relation and the degree defect."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .exact import Weight
from .structure import StructureData


@dataclass(frozen=True)
class Path:
    steps: tuple

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    def increments(self) -> list[Weight]:
        return [b - a for a, b in zip(self.steps, self.steps[1:])]

    def is_positive(self) -> bool:
        return all(t.is_dominant_lattice() for t in self.steps)

    def to_json(self):
        return [t.to_json() for t in self.steps]


def ell_int(s: StructureData, w: Weight) -> int:
    v = s.ell(w)
    if v.denominator != 1:
        raise ValueError(f"ell({w!r}) is not an integer")
    return int(v)


def enumerate_lambda_plus(s: StructureData, d: int) -> list[Weight]:
    """All lambda in N^r with ell(lambda) <= d, graded by ell, then reverse lex."""
    if d < 0:
        return []
    key = ("lambda_plus", d)
    got = s.cache.get(key)
    if got is not None:
        return list(got)
    ell = [int(c) for c in s.ell.coords]
    if any(c <= 0 for c in ell):
        raise ValueError("ell must be positive on Sigma-dual to bound the enumeration")
    r = s.rank
    found = []

    def rec(i, prefix, budget):
        if i == r:
            found.append(tuple(prefix))
            return
        c = 0
        while c * ell[i] <= budget:
            prefix.append(c)
            rec(i + 1, prefix, budget - c * ell[i])
            prefix.pop()
            c += 1

    rec(0, [], d)
    found.sort(key=lambda t: (sum(a * b for a, b in zip(t, ell)), tuple(-x for x in t)))
    out = tuple(Weight(t) for t in found)
    s.cache[key] = out
    return list(out)


def lambda_level(s: StructureData, k: int) -> frozenset:
    """Integer coordinate tuples of all sums of exactly k elements of Lambda_1."""
    levels = s.cache.setdefault("lambda_levels", [frozenset({(0,) * s.rank})])
    steps = [w.ints() for w in s.lambda1]
    while len(levels) <= k:
        prev = levels[-1]
        nxt = set()
        for v in prev:
            for e in steps:
                nxt.add(tuple(a + b for a, b in zip(v, e)))
        levels.append(frozenset(nxt))
    return levels[k]


def in_lambda(s: StructureData, tau: Weight) -> bool:
    if not tau.is_integral():
        return False
    d = s.ell(tau)
    if d < 0 or d.denominator != 1:
        return False
    return tau.ints() in lambda_level(s, int(d))


def enumerate_lambda(s: StructureData, d: int) -> list[Weight]:
    """Elements of Lambda with ell <= d, graded then sorted."""
    out = []
    for k in range(d + 1):
        out.extend(Weight(t) for t in sorted(lambda_level(s, k), reverse=True))
    return out


def enumerate_paths(s: StructureData, start: Weight, end: Weight,
                    positive_only: bool = False) -> list[Path]:
    """Every Lambda_1-step path from ``start`` to ``end``."""
    diff = end - start
    d = s.ell(diff)
    if d < 0 or d.denominator != 1 or not diff.is_integral():
        return []
    d = int(d)
    steps = [w.ints() for w in s.lambda1]
    target = end.ints() if end.is_integral() else None
    if target is None or not start.is_integral():
        return []
    memo: dict = {}

    def reachable(pt, remaining):
        # can we reach target from pt in `remaining` steps
        delta = tuple(b - a for a, b in zip(pt, target))
        return delta in lambda_level(s, remaining)

    def rec(pt, remaining) -> list:
        key = (pt, remaining)
        if key in memo:
            return memo[key]
        if remaining == 0:
            res = [(pt,)] if pt == target else []
            memo[key] = res
            return res
        res = []
        for e in steps:
            nxt = tuple(a + b for a, b in zip(pt, e))
            if positive_only and any(x < 0 for x in nxt):
                continue
            if not reachable(nxt, remaining - 1):
                continue
            for tail in rec(nxt, remaining - 1):
                res.append((pt,) + tail)
        memo[key] = res
        return res

    s0 = start.ints()
    if positive_only and any(x < 0 for x in s0):
        return []
    if not reachable(s0, d):
        return []
    return [Path(tuple(Weight(p) for p in seq)) for seq in rec(s0, d)]


def is_coroot_combination(s: StructureData, v: Weight) -> bool:
    """Whether v is an N-combination of positive coroots."""
    if not v.is_integral():
        return False
    cor = [c.ints() for c in s.positive_coroots]
    target = v.ints()
    if not any(target):
        return True
    if not cor:
        return False
    phi = [sum(col) for col in zip(*[d.root.ints() for d in s.delta_plus])]

    def height(u):
        return sum(a * b for a, b in zip(phi, u))

    heights = [height(c) for c in cor]
    if any(h <= 0 for h in heights):
        raise ValueError("sum of positive roots is not positive on a positive coroot")
    memo: dict = {}

    def rec(u, start) -> bool:
        if not any(u):
            return True
        key = (u, start)
        if key in memo:
            return memo[key]
        hu = height(u)
        ok = False
        if hu > 0:
            for i in range(start, len(cor)):
                if heights[i] <= hu:
                    if rec(tuple(a - b for a, b in zip(u, cor[i])), i):
                        ok = True
                        break
        memo[key] = ok
        return ok

    return rec(target, 0)


def leq(s: StructureData, t1: Weight, t2: Weight) -> bool:
    """t1 <= t2: ell strictly smaller, or equal ell and t2 - t1 a sum of positive coroots."""
    l1, l2 = s.ell(t1), s.ell(t2)
    if l1 < l2:
        return True
    if l1 > l2:
        return False
    return is_coroot_combination(s, t2 - t1)


def degree_defect(s: StructureData, tau: Weight) -> int:
    """j(tau) = sum_{Phi} omega(tau)_+ - sum_{Delta+} alpha(tau) - ell(tau)."""
    pos = sum((max(w(tau), 0) for w in s.phi), 0)
    neg = sum((d.root(tau) for d in s.delta_plus), 0)
    val = pos - neg - s.ell(tau)
    if val.denominator != 1:
        raise ValueError("degree defect is not an integer")
    return int(val)


def iter_box(rank: int, radius: int) -> Iterator[Weight]:
    from itertools import product
    for t in product(range(-radius, radius + 1), repeat=rank):
        yield Weight(t)


__all__ = [
    "Path", "enumerate_lambda_plus", "enumerate_lambda", "lambda_level", "in_lambda",
    "enumerate_paths", "leq", "degree_defect", "is_coroot_combination", "ell_int", "iter_box",
]
