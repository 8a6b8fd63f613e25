"""Deterministic table, CSV and SVG output."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .bounds import BoundReport
from .momentum import RicciInequalityReport
from .toric_bound import vf_bound

DIGITS = 9
# rationals with larger denominators are shown as decimals only
MAX_DENOMINATOR = 10**6


class EmitError(ValueError):
    pass


def decimal(value) -> str:
    return f"{float(value):.{DIGITS}f}"


def exact(value) -> str:
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction) and value.denominator <= MAX_DENOMINATOR:
        return str(value)
    return ""


def render(value) -> str:
    """``"p/q (≈ d)"`` for presentable rationals, ``"≈ d"`` otherwise."""
    e = exact(value)
    return f"{e} (≈ {decimal(value)})" if e else f"≈ {decimal(value)}"


def short(value) -> str:
    return exact(value) or decimal(value)


@dataclass
class Curve:
    title: str
    x_label: str
    y_label: str
    # series name -> list of (x, y)
    series: dict

    @property
    def empty(self) -> bool:
        return not any(self.series.values())


def limit_slope_curve(P, a, samples: int = 20) -> Curve:
    """``s -> s I_H + (1-s) K Vol`` on ``[0, 1]``, including the root ``s*``."""
    r = vf_bound(P, a)
    xs = {Fraction(i, samples) for i in range(samples + 1)}
    if r.s_star is not None:
        xs.add(r.s_star)
    pts = [(s, r.slope(s)) for s in sorted(xs)]
    name = "a=(" + ",".join(str(c) for c in r.direction) + ")"
    return Curve("limit slope", "s", "limit slope", {name: pts})


def profile_curve(rep: RicciInequalityReport, step: int = 1) -> Curve:
    """The two margins ``A/(1+tau)`` and ``-C'`` against ``tau``."""
    base = list(zip(rep.grid, rep.base_margin))[::step]
    fiber = list(zip(rep.grid, rep.fiber_coefficient))[::step]
    return Curve("Ricci inequalities", "tau", "largest admissible t", {"A/(1+tau)": base, "-C'": fiber})


def table(rep: BoundReport) -> str:
    lines = [f"manifold: {rep.manifold}", f"{'method':<10}{'kind':<7}value"]
    rows = sorted(rep.lower_bounds + rep.upper_bounds, key=lambda b: (b.kind, b.method, float(b.value)))
    for b in rows:
        lines.append(f"{b.method:<10}{b.kind:<7}{render(b.value)}  {b.details}".rstrip())
    lo = short(rep.best_lower) if rep.best_lower is not None else "0"
    hi = short(rep.best_upper) if rep.best_upper is not None else "1"
    lines.append(f"bracket: [{lo}, {hi}]")
    lines.append(f"consistent: {'yes' if rep.consistent else 'NO'}")
    return "\n".join(lines) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def report_csv(rep: BoundReport) -> str:
    rows = sorted(rep.lower_bounds + rep.upper_bounds, key=lambda b: (b.kind, b.method, float(b.value)))
    return _csv_text(
        ["kind", "method", "exact", "decimal", "details"],
        [[b.kind, b.method, exact(b.value), decimal(b.value), b.details] for b in rows],
    )


def curve_csv(curve: Curve) -> str:
    rows = []
    for name, pts in curve.series.items():
        for x, y in pts:
            rows.append([name, exact(x), decimal(x), exact(y), decimal(y)])
    return _csv_text(["series", f"{curve.x_label}", f"{curve.x_label}_decimal", "value", "value_decimal"], rows)


def ricci_csv(rep: RicciInequalityReport) -> str:
    """One row per grid point: ``tau, A, -C'``."""
    return _csv_text(["tau", "A", "minus_C_prime"], [[decimal(t), decimal(a), decimal(c)] for t, a, c in rep.rows()])


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def curve_svg(curve: Curve, width: int = 640, height: int = 400) -> str:
    pad = 50
    pts = [(float(x), float(y)) for s in curve.series.values() for x, y in s]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{curve.title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{curve.x_label}</text>',
        f'<text x="12" y="{height / 2:.1f}" font-size="12" transform="rotate(-90 12 {height / 2:.1f})">{curve.y_label}</text>',
        f'<text x="{pad - 4}" y="{height - pad + 14}" text-anchor="end" font-size="10">{x0:.3g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 14}" text-anchor="end" font-size="10">{x1:.3g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="10">{y0:.3g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:.3g}</text>',
    ]
    if y0 < 0 < y1:
        out.append(f'<line x1="{pad}" y1="{sy(0):.2f}" x2="{width - pad}" y2="{sy(0):.2f}" stroke="#999" stroke-dasharray="4 3"/>')
    for k, (name, series) in enumerate(curve.series.items()):
        color = _COLORS[k % len(_COLORS)]
        path = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in series)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        out.append(f'<text x="{width - pad - 4}" y="{pad + 14 * (k + 1)}" text-anchor="end" font-size="11" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def report_curve(rep: BoundReport) -> Curve:
    """Bracket drawn on ``[0, 1]``: one short series per bound."""
    series = {}
    for i, b in enumerate(sorted(rep.lower_bounds + rep.upper_bounds, key=lambda b: (b.kind, b.method))):
        v = float(b.value)
        series[f"{b.kind} {b.method} {short(b.value)}"] = [(v, i), (v, i + 0.8)]
    return Curve(f"bounds for R({rep.manifold})", "t", "producer", series)


def emit(obj: Union[BoundReport, Curve, RicciInequalityReport], fmt: str, path: Optional[Union[str, Path]] = None) -> str:
    """Render ``obj`` as ``table``, ``csv`` or ``svg``; write it to ``path`` if given."""
    if isinstance(obj, BoundReport):
        if obj.empty:
            raise EmitError("nothing to emit")
        text = {"table": table, "csv": report_csv, "svg": lambda r: curve_svg(report_curve(r))}.get(fmt)
    elif isinstance(obj, RicciInequalityReport):
        if not obj.grid:
            raise EmitError("nothing to emit")
        text = {"csv": ricci_csv, "svg": lambda r: curve_svg(profile_curve(r))}.get(fmt)
    elif isinstance(obj, Curve):
        if obj.empty:
            raise EmitError("nothing to emit")
        text = {"csv": curve_csv, "svg": curve_svg}.get(fmt)
    else:
        raise EmitError(f"cannot emit {type(obj).__name__}")
    if text is None:
        raise EmitError(f"format {fmt!r} not supported for {type(obj).__name__}")
    out = text(obj)
    if path is not None:
        Path(path).write_text(out, encoding="utf-8")
    return out
