"""Run the acceptance criteria over the desk cases and print a timing table.

    python scripts/run_acceptance.py                  # everything
    python scripts/run_acceptance.py --case IVc -c 6  # one case, one criterion
"""
import argparse
import json
import sys
from dataclasses import dataclass, field

from capelli.catalog import DESK_CASES, build_case, generic_params, geometric_params
from capelli.criteria import CRITERIA, TITLES


@dataclass
class RunConfig:
    cases: list = field(default_factory=lambda: [c for c, _ in DESK_CASES])
    criteria: list = field(default_factory=lambda: sorted(CRITERIA))
    kinds: tuple = ("geo", "gen")
    json_out: str | None = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--case", action="append", help="case id (repeatable)")
    ap.add_argument("-c", "--criterion", type=int, action="append")
    ap.add_argument("--kind", choices=("geo", "gen"), action="append")
    ap.add_argument("--json", dest="json_out")
    ns = ap.parse_args(argv)
    cfg = RunConfig()
    if ns.case:
        cfg.cases = ns.case
    if ns.criterion:
        cfg.criteria = ns.criterion
    if ns.kind:
        cfg.kinds = tuple(ns.kind)
    cfg.json_out = ns.json_out

    rows, ok = [], True
    for cid, size in DESK_CASES:
        if cid not in cfg.cases:
            continue
        for kind in cfg.kinds:
            params = geometric_params(cid, size) if kind == "geo" else generic_params(cid, size)
            s = build_case(cid, size, params)
            for n in cfg.criteria:
                r = CRITERIA[n](s)
                ok &= r.passed
                rows.append({"case": s.name, "kind": kind, "criterion": n, "pass": r.passed,
                             "checked": r.checked, "seconds": round(r.seconds, 2), "failures": r.failures[:5]})
                print(f"{s.name:10s} {kind}  {n:2d}  {'pass' if r.passed else 'FAIL'}  "
                      f"{r.checked:5d} checks  {r.seconds:7.2f}s  {TITLES[n]}", flush=True)
                for f in r.failures[:5]:
                    print(f"        {f}")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
