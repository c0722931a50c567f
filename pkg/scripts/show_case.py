"""Print the data of one structure: roots, rho, the first p_lambda in ambient
coordinates, virtual dimensions, and the operator D_h for h = p_e1.

    python scripts/show_case.py I --n 2 --k r=1,s=1/2
"""
import argparse

from capelli.catalog import build_case, generic_params, parse_k
from capelli.diffop import d_operator
from capelli.exact import fmt_rat
from capelli.interp import interpolate_p
from capelli.lattice import enumerate_lambda_plus
from capelli.pieri import virtual_dimension
from capelli.structure import classify_rho, poly_to_ambient, weight_to_ambient


def names(s):
    m = s.ambient["m"] if s.ambient else s.rank
    return [f"z{i + 1}" for i in range(m)]


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("case")
    for flag in ("--n", "--a", "--b"):
        ap.add_argument(flag, type=int)
    ap.add_argument("--k")
    ap.add_argument("--degree", type=int, default=2)
    ns = ap.parse_args(argv)
    size = {k: getattr(ns, k) for k in ("n", "a", "b") if getattr(ns, k) is not None}
    k = parse_k(ns.k) if ns.k else generic_params(ns.case, size)
    s = build_case(ns.case, size, k)

    amb = s.ambient is not None
    print(f"{s.name}  rank {s.rank}  |W| = {len(s.group)}  k = "
          + ", ".join(f"{a}={fmt_rat(b)}" for a, b in sorted(s.k_values.items())))
    rho = weight_to_ambient(s, s.rho) if amb else s.rho.coords
    print("rho =", "(" + ", ".join(fmt_rat(x) for x in rho) + ")")
    print("rho flags:", classify_rho(s).as_dict())
    print(f"{len(s.delta_plus)} positive roots, {len(s.phi_plus)} elements of Phi+")
    print()
    for lam in enumerate_lambda_plus(s, ns.degree):
        p = interpolate_p(s, lam).poly
        shown = poly_to_ambient(s, p).pretty(names(s)) if amb else p.pretty()
        try:
            d = fmt_rat(virtual_dimension(s, lam))
        except ZeroDivisionError:
            d = "undefined"
        print(f"lambda = {lam.to_json()}  d = {d}")
        print(f"    p = {shown}")
    e1 = s.basis_weight(0)
    D = d_operator(s, interpolate_p(s, e1).poly)
    print()
    print(f"D_h for h = p_{e1.to_json()}: {len(D.terms)} shifts")
    for t in D.support():
        print(f"    T_{t.to_json()}: {D.terms[t].pretty()}")


if __name__ == "__main__":
    main()
