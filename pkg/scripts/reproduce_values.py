#!/usr/bin/env python3
"""Print the headline numbers for the two blowups of P^2 and the square.

Usage: python3 scripts/reproduce_values.py [--fast]
"""

import argparse
from fractions import Fraction

from ricci_lab import emit
from ricci_lab.bounds import ReportOptions, builtin, report
from ricci_lab.intersection import DelPezzoDescriptor, anticanonical, exceptional, seshadri, stoppa_threshold_m1
from ricci_lab.momentum import equality_profile, perturbation, ricci_lower_bound
from ricci_lab.polytope import AffineFunction, futaki_pairing
from ricci_lab.toric_bound import optimize_direction, vf_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fast", action="store_true", help="coarser grids for a quick look")
    args = ap.parse_args()
    grid = 1024 if args.fast else 4096

    for name, a in (("m1", (-1, 0)), ("m2", (-1, -1))):
        P = builtin(name).polytope
        r = vf_bound(P, a)
        opt = optimize_direction(P)
        print(f"{name}: a={a}  I_H={futaki_pairing(P, AffineFunction.linear(*a))}  K={r.weight}  "
              f"slope={r.slope_coefficients[0]} + ({r.slope_coefficients[1]}) s  s*={emit.render(r.s_star)}  "
              f"optimised={opt.threshold:.12f}")

    psi = equality_profile(Fraction(6, 7))
    coeffs = ", ".join(str(c) for c in psi.pieces[0].c[1:])
    bdry = "  ".join(f"{k}={v}" for k, v in psi.boundary_data().items())
    print(f"psi_6/7: Q coefficients ({coeffs})  {bdry}  R-bound {ricci_lower_bound(psi, grid).t_max}")
    for delta in (Fraction(1, 100), Fraction(1, 1000)):
        t = ricci_lower_bound(perturbation(delta, delta / 10, grid_size=grid), grid).t_max
        print(f"perturbed, delta={delta}: {emit.render(t)}  (6/7 - 10 delta = {float(Fraction(6, 7) - 10 * delta):.9f})")

    M = DelPezzoDescriptor.blowup(1)
    st = stoppa_threshold_m1()
    print(f"seshadri(c1, E) = {seshadri(anticanonical(1), exceptional(1, 1), M)}  slope threshold = {st.threshold}")

    opts = ReportOptions(grid_size=grid, deltas=(1e-2, 1e-3) if args.fast else (1e-2, 1e-3, 1e-4))
    for name in ("m1", "m2", "p1xp1"):
        print()
        print(emit.table(report(builtin(name), opts)), end="")


if __name__ == "__main__":
    main()
