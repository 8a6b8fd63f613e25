#!/usr/bin/env python3
"""Write CSV + SVG for the limit-slope lines, the Ricci coefficients and the reports.

Usage: python3 scripts/plot_curves.py OUTDIR
"""

import sys
from fractions import Fraction
from pathlib import Path

from ricci_lab import emit
from ricci_lab.bounds import ReportOptions, builtin, report
from ricci_lab.momentum import equality_profile, perturbation, ricci_lower_bound


def main(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    for name, a in (("m1", (-1, 0)), ("m2", (-1, -1))):
        curve = emit.limit_slope_curve(builtin(name).polytope, a)
        emit.emit(curve, "csv", out / f"slope_{name}.csv")
        emit.emit(curve, "svg", out / f"slope_{name}.svg")

    profiles = {
        "psi": equality_profile(Fraction(6, 7)),
        "perturbed_1e-2": perturbation(Fraction(1, 100), Fraction(1, 1000), grid_size=1024),
    }
    for name, prof in profiles.items():
        rep = ricci_lower_bound(prof, 1024)
        emit.emit(rep, "csv", out / f"ricci_{name}.csv")
        emit.emit(rep, "svg", out / f"ricci_{name}.svg")

    opts = ReportOptions(deltas=(1e-2, 1e-3), grid_size=2048)
    for name in ("m1", "m2", "p1xp1"):
        rep = report(builtin(name), opts)
        for fmt in ("table", "csv", "svg"):
            emit.emit(rep, fmt, out / f"report_{name}.{'txt' if fmt == 'table' else fmt}")
    print(f"wrote {len(list(out.iterdir()))} files to {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(Path(sys.argv[1]))
