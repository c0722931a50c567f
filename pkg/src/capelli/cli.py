"""Command-line front end.

Exit status: 0 on success, 1 when a computation fails or a check does not
hold, 2 on usage errors. Output is deterministic for fixed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .catalog import (
    CASE_IDS, InvalidCaseParams, build_case, list_cases, load_structure_file, parse_k,
)
from .diffop import apply, apply_dh, build_E, d_operator, minus
from .exact import SingularSystem, UndefinedValue, Weight, fmt_rat
from .interp import (
    DimensionMismatch, UndefinedNormalizer, ell_shifted, interpolate_p, p_value_by_paths,
)
from .lattice import enumerate_lambda, enumerate_lambda_plus, in_lambda
from .pieri import (
    pieri_alternating, pieri_direct, pieri_path_formula, virtual_dimension, virtual_dimension_product,
)
from .structure import StructureData, StructureError, check_axioms, poly_to_ambient

SUBCOMMANDS = ("list-cases", "verify", "interpolate", "eigencheck", "pathsum", "pieri", "operator", "dimension")
DEFAULT_SEED = 20240


class UsageError(Exception):
    """Bad flag value; ``flag`` names the offender."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class CheckFailed(Exception):
    pass


@dataclass
class CommandRequest:
    subcommand: str
    case: str | None = None
    size: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)
    file: str | None = None
    lam: tuple | None = None
    mu: tuple | None = None
    tau: tuple | None = None
    h_lambda: tuple | None = None
    h_ell_power: int | None = None
    minus: bool = False
    degree: int | None = None
    fmt: str = "text"
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.subcommand != "list-cases" and (self.case is None) == (self.file is None):
            raise UsageError("--case/--file", "give exactly one of --case and --file")


# ----------------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------------

def _int_tuple(flag: str, text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capelli", description="Capelli polynomials, difference operators "
                                     "and Pieri rules for the tabulated structures.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--format", dest="fmt", choices=("text", "structured"), default="text")
        if name == "list-cases":
            continue
        p.add_argument("--case", choices=CASE_IDS)
        p.add_argument("--n", type=int)
        p.add_argument("--a", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--k", help="orbit parameters, e.g. r=1,s=1/2")
        p.add_argument("--file", help="YAML or JSON structure document")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if name in ("verify", "eigencheck"):
            p.add_argument("--degree", type=int)
        if name in ("interpolate", "eigencheck", "pathsum", "dimension"):
            p.add_argument("--lambda", dest="lam")
        if name in ("pathsum", "pieri"):
            p.add_argument("--mu")
        if name == "pieri":
            p.add_argument("--tau")
        if name in ("eigencheck", "pieri", "operator"):
            p.add_argument("--h-lambda")
            p.add_argument("--h-ell-power", type=int)
            p.add_argument("--minus", action="store_true")
    return parser


def request_from_args(ns: argparse.Namespace) -> CommandRequest:
    if ns.subcommand == "list-cases":
        return CommandRequest("list-cases", fmt=ns.fmt)
    size = {key: getattr(ns, key) for key in ("n", "a", "b") if getattr(ns, key) is not None}
    try:
        k = parse_k(ns.k)
    except ValueError as exc:
        raise UsageError("--k", str(exc)) from None
    h_lambda = _int_tuple("--h-lambda", getattr(ns, "h_lambda", None))
    h_pow = getattr(ns, "h_ell_power", None)
    if h_lambda is not None and h_pow is not None:
        raise UsageError("--h-lambda/--h-ell-power", "give at most one h specifier")
    if h_pow is not None and h_pow < 0:
        raise UsageError("--h-ell-power", "must be non-negative")
    degree = getattr(ns, "degree", None)
    if degree is not None and degree < 0:
        raise UsageError("--degree", "must be non-negative")
    return CommandRequest(
        ns.subcommand, case=ns.case, size=size, k=k, file=ns.file,
        lam=_int_tuple("--lambda", getattr(ns, "lam", None)),
        mu=_int_tuple("--mu", getattr(ns, "mu", None)),
        tau=_int_tuple("--tau", getattr(ns, "tau", None)),
        h_lambda=h_lambda, h_ell_power=h_pow, minus=getattr(ns, "minus", False),
        degree=degree, fmt=ns.fmt, seed=ns.seed,
    )


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------

def load_structure(req: CommandRequest) -> StructureData:
    if req.file is not None:
        if req.size or req.k:
            raise UsageError("--file", "size and --k flags only apply with --case")
        try:
            return load_structure_file(req.file)
        except OSError as exc:
            raise UsageError("--file", str(exc)) from None
    try:
        return build_case(req.case, req.size, req.k)
    except InvalidCaseParams as exc:
        raise UsageError("--case", str(exc)) from None


def _weight(s: StructureData, flag: str, t: tuple | None, required: bool = True) -> Weight | None:
    if t is None:
        if required:
            raise UsageError(flag, "is required")
        return None
    if len(t) != s.rank:
        raise UsageError(flag, f"expected {s.rank} coordinates, got {len(t)}")
    return s.weight(t)


def _dominant(s: StructureData, flag: str, t: tuple | None) -> Weight:
    w = _weight(s, flag, t)
    if not w.is_dominant_lattice():
        raise UsageError(flag, f"{list(t)} is not in Lambda_+")
    return w


def _h(s: StructureData, req: CommandRequest):
    if req.h_lambda is not None:
        lam = _dominant(s, "--h-lambda", req.h_lambda)
        h = interpolate_p(s, lam).poly
        label = f"p_{list(req.h_lambda)}"
    elif req.h_ell_power is not None:
        h = ell_shifted(s) ** req.h_ell_power
        label = f"(ell - ell(rho))^{req.h_ell_power}"
    else:
        raise UsageError("--h-lambda", "one of --h-lambda and --h-ell-power is required")
    if req.minus:
        h, label = minus(h), label + "^-"
    return h, label


def _poly_doc(s: StructureData, p) -> dict:
    doc = {"sigma": p.to_json()}
    if s.ambient:
        doc["ambient"] = poly_to_ambient(s, p).to_json()
    return doc


def _poly_text(s: StructureData, p) -> str:
    if s.ambient:
        m = len(s.ambient["sigma"][0])
        return poly_to_ambient(s, p).pretty([f"z{i + 1}" for i in range(m)])
    return p.pretty()


# ----------------------------------------------------------------------------
# subcommands; each returns (document, text lines, ok)
# ----------------------------------------------------------------------------

def cmd_list_cases(req):
    rows = list_cases()
    lines = [f"{r['case']:4s} {r['constraint']:18s} size={','.join(r['size_params']) or '-':4s} "
             f"orbits={r['orbits']}" for r in rows]
    return {"cases": rows}, lines, True


def cmd_verify(req, s):
    deg = 3 if req.degree is None else req.degree
    rep = check_axioms(s, deg)
    lines = [f"{s.name}  rho = {s.rho.to_json()}"] + rep.lines()
    lines.append(f"C0 verified to degree {deg}" if rep.passed else "axiom check FAILED")
    return {"structure": s.summary(), **rep.to_json(), "pass": rep.passed}, lines, rep.passed


def cmd_interpolate(req, s):
    lam = _dominant(s, "--lambda", req.lam)
    cp = interpolate_p(s, lam)
    doc = {"structure": s.summary(), "lambda": lam.to_json(), "ell": max(cp.poly.degree(), 0),
           "poly": _poly_doc(s, cp.poly)}
    return doc, [f"p_{list(req.lam)} = {_poly_text(s, cp.poly)}"], True


def cmd_eigencheck(req, s):
    if req.lam is not None:
        lams = [_dominant(s, "--lambda", req.lam)]
    else:
        lams = enumerate_lambda_plus(s, 3 if req.degree is None else req.degree)
    h = label = None
    if req.h_lambda is not None or req.h_ell_power is not None:
        h, label = _h(s, req)
    E = build_E(s) if h is None else None
    rows, lines, ok = [], [], True
    for lam in lams:
        p = interpolate_p(s, lam).poly
        if h is None:
            got, ev = apply(E, p), s.ell(s.rho + lam)
        else:
            got, ev = apply_dh(s, h, p), h.evaluate((s.rho + lam).coords)
        good = got == p.scale(ev)
        ok &= good
        rows.append({"lambda": lam.to_json(), "eigenvalue": fmt_rat(ev), "pass": good})
        lines.append(f"{'pass' if good else 'FAIL'}  lambda={lam.to_json()}  eigenvalue {fmt_rat(ev)}")
    op = "E" if h is None else f"D_h, h = {label}"
    return {"structure": s.summary(), "operator": op, "results": rows, "pass": ok}, [op] + lines, ok


def cmd_pathsum(req, s):
    lam = _dominant(s, "--lambda", req.lam)
    mu = _dominant(s, "--mu", req.mu)
    by_paths = p_value_by_paths(s, lam, mu)
    direct = interpolate_p(s, lam).poly.evaluate((s.rho + mu).coords)
    ok = by_paths == direct
    doc = {"lambda": lam.to_json(), "mu": mu.to_json(), "paths": fmt_rat(by_paths),
           "interpolation": fmt_rat(direct), "pass": ok}
    line = f"p_{lam.to_json()}(rho + {mu.to_json()}) = {fmt_rat(by_paths)} (paths), {fmt_rat(direct)} (interpolation)"
    return doc, [line], ok


def cmd_pieri(req, s):
    h, label = _h(s, req)
    mu = _dominant(s, "--mu", req.mu)
    table = pieri_direct(s, h, mu)
    tau = _weight(s, "--tau", req.tau, required=False)
    taus = [tau] if tau is not None else [t for t in enumerate_lambda(s, max(h.degree(), 0))
                                          if (mu + t).is_dominant_lattice()]
    rows, lines, ok = [], [f"h = {label}, mu = {mu.to_json()}"], True
    for t in taus:
        a = table.coefficient(t)
        if not in_lambda(s, t) or not (mu + t).is_dominant_lattice():
            b = c = a
        else:
            b = pieri_path_formula(s, h, mu, t)
            c = pieri_alternating(s, h, mu, t)
        good = a == b == c
        ok &= good
        rows.append({"tau": t.to_json(), "direct": fmt_rat(a), "paths": fmt_rat(b),
                     "alternating": fmt_rat(c), "pass": good})
        if a or b or c:
            lines.append(f"{'pass' if good else 'FAIL'}  tau={t.to_json()}  a = {fmt_rat(a)}")
    doc = {"table": table.to_json(), "routes": rows, "pass": ok}
    return doc, lines, ok


def cmd_operator(req, s):
    h, label = _h(s, req)
    D = d_operator(s, h)
    lines = [f"D_h, h = {label}: {len(D.terms)} shifts"]
    for t in D.support():
        lines.append(f"  T_{t.to_json()}: {D.terms[t].pretty()}")
    return {"h": h.to_json(), "operator": D.to_json()}, lines, True


def cmd_dimension(req, s):
    lam = _dominant(s, "--lambda", req.lam)
    d = virtual_dimension(s, lam)
    d2 = virtual_dimension_product(s, lam)
    ok = d == d2
    doc = {"lambda": lam.to_json(), "d": fmt_rat(d), "product_form": fmt_rat(d2), "pass": ok}
    return doc, [f"d_{lam.to_json()} = {fmt_rat(d)}" + ("" if ok else f"  (product form {fmt_rat(d2)})")], ok


_HANDLERS = {
    "verify": cmd_verify, "interpolate": cmd_interpolate, "eigencheck": cmd_eigencheck,
    "pathsum": cmd_pathsum, "pieri": cmd_pieri, "operator": cmd_operator, "dimension": cmd_dimension,
}


def run(req: CommandRequest, out=None) -> int:
    out = out or sys.stdout
    if req.subcommand == "list-cases":
        doc, lines, ok = cmd_list_cases(req)
    else:
        s = load_structure(req)
        doc, lines, ok = _HANDLERS[req.subcommand](req, s)
    if req.fmt == "structured":
        out.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(request_from_args(ns))
    except UsageError as exc:
        print(f"capelli: error: {exc}", file=sys.stderr)
        return 2
    except (SingularSystem, DimensionMismatch, UndefinedValue, UndefinedNormalizer, StructureError,
            ArithmeticError, CheckFailed) as exc:
        print(f"capelli: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
