"""Command line interface: ``ricci-lab <group> <command> ...``.

Exit codes: 0 success, 2 validation error, 3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import abreu, bounds, emit, intersection, momentum, polytope, toric_bound

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE = 0, 2, 3


def load_polytope(spec: str) -> polytope.LatticePolygon:
    """A built-in manifold name or a JSON file ``{"vertices": [...]}``."""
    if spec.lower() in bounds.BUILTINS:
        return bounds.builtin(spec).polytope
    data = json.loads(Path(spec).read_text(encoding="utf-8"))
    return polytope.from_vertices(data["vertices"])


def load_profile(path: str) -> momentum.MomentumProfile:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "q_coeffs" in data:
        return momentum.MomentumProfile.from_q_coeffs(data["q_coeffs"], label=Path(path).stem)
    if "samples" in data:
        return momentum.MomentumProfile.from_samples(data["samples"], label=Path(path).stem)
    raise ValueError("profile file needs 'q_coeffs' or 'samples'")


def _rationals(text: str, n: int) -> list:
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated numbers, got {text!r}")
    return [Fraction(p.strip()) for p in parts]


def _slope_text(c0, c1) -> str:
    sign = "-" if c1 < 0 else "+"
    return f"{c0} {sign} {abs(c1)} s"


def cmd_bound_vf(args) -> int:
    P = load_polytope(args.polytope)
    a = _rationals(args.direction, 2)
    r = toric_bound.vf_bound(P, a)
    print(f"direction: ({a[0]}, {a[1]})")
    print(f"weight K: {r.weight}")
    print(f"pairing I_H: {r.pairing}")
    print(f"volume: {r.volume}")
    print(f"limit slope: {_slope_text(*r.slope_coefficients)}")
    if r.s_star is None:
        print("threshold: none (I_H >= 0, no obstruction)")
    else:
        print(f"threshold: {emit.render(r.s_star)}")
    if args.csv:
        emit.emit(emit.limit_slope_curve(P, a), "csv", args.csv)
    if args.svg:
        emit.emit(emit.limit_slope_curve(P, a), "svg", args.svg)
    return EXIT_OK


def cmd_bound_vf_opt(args) -> int:
    P = load_polytope(args.polytope)
    res = toric_bound.optimize_direction(P, args.steps, args.tol)
    if res.threshold is None:
        print("threshold: none (no destabilising direction)")
        return EXIT_OK
    print(f"direction: ({res.direction[0]:.12f}, {res.direction[1]:.12f})")
    print(f"theta: {res.theta:.12f}")
    print(f"threshold: ≈ {res.threshold:.12f}")
    return EXIT_OK


def cmd_bound_slope(args) -> int:
    if args.descriptor:
        M = intersection.DelPezzoDescriptor.from_json(json.loads(Path(args.descriptor).read_text()))
    else:
        M = intersection.DelPezzoDescriptor.blowup(args.k)
    if M.k != 1:
        raise ValueError(f"no slope threshold for k={M.k}: the surface is slope stable")
    eps = intersection.seshadri(M.anticanonical, intersection.exceptional(1, 1), M)
    st = intersection.stoppa_threshold_m1()
    print(f"seshadri constant of E: {eps}")
    print(f"left side: {_slope_text(*st.left).replace(' s', ' t')}")
    print(f"right side: {_slope_text(*st.right).replace(' s', ' t')}")
    print(f"threshold: {emit.render(st.threshold)}")
    return EXIT_OK


def cmd_bound_alpha(args) -> int:
    print(emit.render(bounds.alpha_lower_bound(Fraction(args.alpha), args.n)))
    return EXIT_OK


def _profile_outputs(args, rep):
    if args.csv:
        emit.emit(rep, "csv", args.csv)
    if args.svg:
        emit.emit(rep, "svg", args.svg)


def _print_ricci(rep):
    print(f"t_max: {emit.render(rep.t_max)}")
    print(f"attained at tau = {emit.short(rep.location)} ({rep.binding} inequality)")


def cmd_profile_equality(args) -> int:
    prof = momentum.equality_profile(Fraction(args.t))
    c = prof.pieces[0].c[1:]
    print("Q coefficients (tau^1..tau^3): " + ", ".join(str(x) for x in c))
    for k, v in prof.boundary_data().items():
        print(f"{k} = {v}")
    if prof.q(Fraction(1)) > 0:
        rep = momentum.ricci_lower_bound(prof, args.grid)
        _print_ricci(rep)
        _profile_outputs(args, rep)
    return EXIT_OK


def cmd_profile_check(args) -> int:
    prof = load_profile(args.file)
    for k, v in prof.boundary_data().items():
        print(f"{k} = {emit.short(v)}")
    rep = momentum.ricci_lower_bound(prof, args.grid)
    _print_ricci(rep)
    _profile_outputs(args, rep)
    return EXIT_OK


def cmd_profile_perturb(args) -> int:
    eps = args.eps if args.eps is not None else args.delta / 10
    prof = momentum.perturbation(args.delta, eps, grid_size=args.grid)
    print(prof.label)
    for name, (ok, val, loc) in prof.constraints.items():
        print(f"{name:<14}{'ok' if ok else 'FAIL'}  worst={emit.short(val)} at tau={emit.short(loc)}")
    rep = momentum.ricci_lower_bound(prof, args.grid)
    _print_ricci(rep)
    _profile_outputs(args, rep)
    return EXIT_OK


def cmd_check_abreu(args) -> int:
    P = load_polytope(args.polytope)
    a1, a2, c = _rationals(args.H, 3)
    H = polytope.AffineFunction((a1, a2), c)
    spec = abreu.QuadratureSpec(args.depth, args.rho, args.h, args.gauss)
    if args.csv:
        pts, S = abreu.curvature_samples(P, spec)
        rows = [[f"{x:.9f}", f"{y:.9f}", f"{s:.9f}"] for (x, y), s in zip(pts, S)]
        Path(args.csv).write_text(emit._csv_text(["x", "y", "S"], rows), encoding="utf-8")
    res = abreu.check_affine_pairing(P, H, spec)
    print(f"lhs (numerical int S H dmu): {res.lhs:.9f}")
    print(f"rhs (exact int H dsigma): {res.rhs}")
    print(f"relative error: {res.relative_error:.3e}")
    if not res.relative_error < args.tolerance:
        raise abreu.ConvergenceError("Abreu pairing check failed", res.relative_error)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.manifold.lower() in bounds.BUILTINS:
        M = bounds.builtin(args.manifold)
    else:
        M = bounds.load_descriptor(args.manifold)
    rep = bounds.report(M)
    text = emit.emit(rep, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    if not rep.consistent:
        logger.warning("best lower bound exceeds best upper bound")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ricci-lab", description="Bounds for the greatest Ricci lower bound R(M).")
    p.add_argument("-v", "--verbose", action="store_true")
    groups = p.add_subparsers(dest="group", required=True)

    bound = groups.add_parser("bound", help="individual bound producers").add_subparsers(dest="cmd", required=True)
    s = bound.add_parser("vf", help="vector-field bound for one direction")
    s.add_argument("--polytope", required=True, help="JSON file or m1/m2/p1xp1")
    s.add_argument("--direction", required=True, help="DX,DY")
    s.add_argument("--csv")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_bound_vf)
    s = bound.add_parser("vf-opt", help="optimise the vector-field bound over directions")
    s.add_argument("--polytope", required=True)
    s.add_argument("--steps", type=int, default=64)
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_bound_vf_opt)
    s = bound.add_parser("slope", help="twisted slope threshold")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--descriptor")
    s.set_defaults(func=cmd_bound_slope)
    s = bound.add_parser("alpha", help="alpha-invariant lower bound")
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_bound_alpha)

    prof = groups.add_parser("profile", help="momentum profiles").add_subparsers(dest="cmd", required=True)
    for name, func in (("equality", cmd_profile_equality), ("check", cmd_profile_check), ("perturb", cmd_profile_perturb)):
        s = prof.add_parser(name)
        s.add_argument("--grid", type=int, default=4096)
        s.add_argument("--csv")
        s.add_argument("--svg")
        s.set_defaults(func=func)
        if name == "equality":
            s.add_argument("--t", required=True, help="NUM/DEN")
        elif name == "check":
            s.add_argument("--file", required=True)
        else:
            s.add_argument("--delta", type=float, required=True)
            s.add_argument("--eps", type=float)

    check = groups.add_parser("check", help="numerical cross-checks").add_subparsers(dest="cmd", required=True)
    s = check.add_parser("abreu")
    s.add_argument("--polytope", required=True)
    s.add_argument("--H", required=True, help="a1,a2,c for H = a1 x + a2 y + c")
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--rho", type=float, default=1e-2)
    s.add_argument("--h", type=float, default=1e-3)
    s.add_argument("--gauss", type=int, default=4)
    s.add_argument("--tolerance", type=float, default=1e-2)
    s.add_argument("--csv", help="write (x, y, S) samples")
    s.set_defaults(func=cmd_check_abreu)

    s = groups.add_parser("report", help="aggregate bracket for one manifold")
    s.add_argument("--manifold", required=True, help="m1, m2, p1xp1 or a descriptor JSON file")
    s.add_argument("--format", choices=("table", "csv", "svg"), default="table")
    s.add_argument("--out")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except abreu.ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, KeyError, OSError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
