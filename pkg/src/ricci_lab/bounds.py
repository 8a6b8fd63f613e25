"""Aggregate every bound producer into a bracket for R(M)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .intersection import DelPezzoDescriptor, exceptional, seshadri, stoppa_threshold_m1
from .momentum import perturbation, ricci_lower_bound
from .polytope import LatticePolygon, as_rational, from_vertices
from .toric_bound import facet_directions, optimize_direction, vf_bound


class ReportError(ValueError):
    pass


def alpha_lower_bound(alpha, n: int) -> Fraction:
    """``min(1, alpha (n + 1) / n)``."""
    alpha = as_rational(alpha)
    if alpha <= 0 or n < 1:
        raise ValueError("alpha and n must be positive")
    return min(Fraction(1), alpha * Fraction(n + 1, n))


@dataclass
class ManifoldDescriptor:
    name: str
    polytope: Optional[LatticePolygon] = None
    picard: Optional[DelPezzoDescriptor] = None
    # torus-equivariant alpha invariant, supplied as data
    alpha: Optional[Fraction] = None
    n: int = 2
    # the profile family on P(O(-1) + O) applies
    momentum_ansatz: bool = False
    # directions tried before the facet normals
    vf_directions: tuple = ()

    def __post_init__(self):
        if self.polytope is None and self.picard is None and self.alpha is None:
            raise ValueError("descriptor needs a polytope, a Picard descriptor or an alpha invariant")
        if self.alpha is not None:
            self.alpha = as_rational(self.alpha)


M1_VERTICES = ((0, 0), (2, 0), (2, 1), (0, 3))
M2_VERTICES = ((0, 0), (2, 0), (2, 1), (1, 2), (0, 2))
P1XP1_VERTICES = ((0, 0), (2, 0), (2, 2), (0, 2))


def builtin(name: str) -> ManifoldDescriptor:
    key = name.lower()
    if key == "m1":
        return ManifoldDescriptor(
            "m1", from_vertices(M1_VERTICES), DelPezzoDescriptor.blowup(1),
            momentum_ansatz=True, vf_directions=((-1, 0),),
        )
    if key == "m2":
        return ManifoldDescriptor(
            "m2", from_vertices(M2_VERTICES), DelPezzoDescriptor.blowup(2),
            alpha=Fraction(1, 3), vf_directions=((-1, -1),),
        )
    if key == "p1xp1":
        # Kaehler-Einstein, so the alpha bound is supplied as 1
        return ManifoldDescriptor("p1xp1", from_vertices(P1XP1_VERTICES), alpha=Fraction(1))
    raise KeyError(name)


BUILTINS = ("m1", "m2", "p1xp1")


def load_descriptor(path) -> ManifoldDescriptor:
    """JSON with any of ``vertices``, ``picard``, ``alpha``, ``momentum``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    poly = from_vertices(data["vertices"]) if "vertices" in data else None
    picard = DelPezzoDescriptor.from_json(data["picard"]) if "picard" in data else None
    alpha = as_rational(data["alpha"]) if "alpha" in data else None
    return ManifoldDescriptor(
        data.get("name", Path(path).stem), poly, picard, alpha,
        n=int(data.get("n", 2)), momentum_ansatz=bool(data.get("momentum", False)),
        vf_directions=tuple(tuple(d) for d in data.get("directions", ())),
    )


@dataclass(frozen=True)
class Bound:
    value: object
    method: str
    kind: str
    details: str = ""


@dataclass
class BoundReport:
    manifold: str
    lower_bounds: list = field(default_factory=list)
    upper_bounds: list = field(default_factory=list)

    @property
    def best_lower(self):
        return max((b.value for b in self.lower_bounds), default=None)

    @property
    def best_upper(self):
        return min((b.value for b in self.upper_bounds), default=None)

    @property
    def consistent(self) -> bool:
        lo, hi = self.best_lower, self.best_upper
        return lo is None or hi is None or lo <= hi

    def add(self, bound: Bound):
        if not 0 <= bound.value <= 1:
            raise ReportError(f"{bound.method} produced {bound.value} outside [0, 1]")
        (self.lower_bounds if bound.kind == "lower" else self.upper_bounds).append(bound)

    @property
    def empty(self) -> bool:
        return not (self.lower_bounds or self.upper_bounds)


@dataclass(frozen=True)
class ReportOptions:
    deltas: tuple = (1e-2, 1e-3, 1e-4)
    grid_size: int = 4096
    coarse_steps: int = 64
    refine_tolerance: float = 1e-10
    # None runs every applicable producer
    producers: Optional[Sequence[str]] = None


PRODUCERS = ("alpha", "momentum", "vf-bound", "vf-opt", "slope")


def _fmt_dir(a) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def _alpha(M: ManifoldDescriptor, opts: ReportOptions):
    if M.alpha is None:
        return []
    return [Bound(alpha_lower_bound(M.alpha, M.n), "alpha", "lower", f"alpha={M.alpha} n={M.n}")]


def _momentum(M: ManifoldDescriptor, opts: ReportOptions):
    if not M.momentum_ansatz:
        return []
    best, tag = None, ""
    for delta in opts.deltas:
        prof = perturbation(delta, delta / 10, grid_size=opts.grid_size)
        t = float(ricci_lower_bound(prof, opts.grid_size).t_max)
        if best is None or t > best:
            best, tag = t, f"delta={delta:g} grid={opts.grid_size}"
    return [Bound(best, "momentum", "lower", tag)]


def _vf_bound(M: ManifoldDescriptor, opts: ReportOptions):
    if M.polytope is None:
        return []
    best = None
    for a in (*M.vf_directions, *facet_directions(M.polytope)):
        r = vf_bound(M.polytope, a)
        if r.s_star is not None and (best is None or r.s_star < best.s_star):
            best = r
    if best is None:
        return []
    return [Bound(best.s_star, "vf-bound", "upper", f"direction={_fmt_dir(best.direction)} K={best.weight}")]


def _vf_opt(M: ManifoldDescriptor, opts: ReportOptions):
    if M.polytope is None:
        return []
    res = optimize_direction(M.polytope, opts.coarse_steps, opts.refine_tolerance)
    if res.threshold is None:
        return []
    # the float direction is itself rational, so its s* is a rigorous bound
    exact = vf_bound(M.polytope, tuple(Fraction(c) for c in res.direction)).s_star
    if exact is None:
        return []
    return [Bound(exact, "vf-opt", "upper", f"theta={res.theta:.9f}")]


def _slope(M: ManifoldDescriptor, opts: ReportOptions):
    # only the one-point blowup is slope unstable
    if M.picard is None or M.picard.k != 1:
        return []
    eps = seshadri(M.picard.anticanonical, exceptional(1, 1), M.picard)
    return [Bound(stoppa_threshold_m1().threshold, "slope", "upper", f"seshadri(E)={eps}")]


_RUNNERS = {
    "alpha": _alpha,
    "momentum": _momentum,
    "vf-bound": _vf_bound,
    "vf-opt": _vf_opt,
    "slope": _slope,
}


def report(M: ManifoldDescriptor, options: ReportOptions = ReportOptions()) -> BoundReport:
    """Run every applicable producer and collect the bracket for ``R(M)``."""
    names = PRODUCERS if options.producers is None else tuple(options.producers)
    unknown = [n for n in names if n not in _RUNNERS]
    if unknown:
        raise ReportError(f"unknown producer(s): {', '.join(unknown)}")
    out = BoundReport(M.name)
    for name in names:
        for b in _RUNNERS[name](M, options):
            out.add(b)
    if out.empty:
        raise ReportError(f"no bound producer applies to {M.name}")
    return out
