"""Upper bounds for R(M) from toric holomorphic vector fields.

For a toric surface with moment polygon P, the Hamiltonian ``H = <a, x>``
generates a holomorphic vector field.  Along the induced family of metrics
the twisted Mabuchi functional ``M + (1 - s) J`` has limiting slope

    s * I_H + (1 - s) * K * Vol

where ``I_H`` is :func:`~ricci_lab.polytope.futaki_pairing` and ``K`` is the
weight of the action at the fixed locus where ``H`` is minimal.  Whenever
this slope is negative the functional is unbounded below and ``R(M) <= s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence

import numpy as np

from .polytope import (
    AffineFunction,
    LatticePolygon,
    PolytopeError,
    as_rational,
    cross,
    dot,
    futaki_pairing,
    volume,
)

_GOLDEN = (math.sqrt(5) - 1) / 2


def _direction(a) -> tuple:
    """Exact rationals unless a float is involved, in which case floats."""
    ax, ay = a
    if any(isinstance(c, (float, np.floating)) for c in (ax, ay)):
        out = (float(ax), float(ay))
    else:
        out = (as_rational(ax), as_rational(ay))
    if out[0] == 0 and out[1] == 0:
        raise ValueError("direction must be nonzero")
    return out


def _pairing_vector(P: LatticePolygon) -> tuple[Fraction, Fraction]:
    # I_H is linear in the gradient and blind to constants
    return (
        futaki_pairing(P, AffineFunction.linear(1, 0)),
        futaki_pairing(P, AffineFunction.linear(0, 1)),
    )


def min_face(P: LatticePolygon, a: Sequence) -> list[int]:
    """Indices of the vertices minimising ``<a, x>`` over P (1 or 2 of them)."""
    a = _direction(a)
    vals = [dot(a, v) for v in P.vertices]
    m = min(vals)
    idx = [i for i, v in enumerate(vals) if v == m]
    n = len(P.vertices)
    if len(idx) == 2 and idx == [0, n - 1]:
        idx = [n - 1, 0]
    return idx


def divergence_weight(P: LatticePolygon, a: Sequence, vertex: Optional[int] = None):
    """Weight ``K`` of the action at the minimum of ``H = <a, x>``.

    Sum of ``<w, a>`` over the two primitive edge directions ``w`` leaving a
    minimising vertex.  ``vertex`` picks which vertex of a minimising edge to
    use; both give the same answer on Delzant polygons.
    """
    a = _direction(a)
    face = min_face(P, a)
    if vertex is None:
        vertex = face[0]
    elif vertex not in face:
        raise ValueError(f"vertex {vertex} does not minimise <a, x>")
    w1, w2 = P.edge_directions(vertex)
    if abs(cross(w1, w2)) != 1:
        raise PolytopeError(f"vertex {P.vertices[vertex]} is not Delzant")
    p1, p2 = dot(w1, a), dot(w2, a)
    if isinstance(p1, float):
        # rounding at a near-tie between two vertices
        p1, p2 = (0.0 if -1e-12 < p < 0 else p for p in (p1, p2))
    if p1 < 0 or p2 < 0:
        raise ArithmeticError("negative edge pairing at a minimising vertex")
    return p1 + p2


@dataclass(frozen=True)
class VFBoundResult:
    direction: tuple
    weight: Real
    pairing: Real
    volume: Fraction
    s_star: Optional[Real]
    # limit slope = constant + linear * s
    slope_coefficients: tuple
    # H normalised to have minimum 0 on P
    hamiltonian: Optional[AffineFunction] = None

    def slope(self, s):
        c0, c1 = self.slope_coefficients
        return c0 + c1 * s


def vf_bound(P: LatticePolygon, a: Sequence) -> VFBoundResult:
    a = _direction(a)
    K = divergence_weight(P, a)
    Ix, Iy = _pairing_vector(P)
    pairing = a[0] * Ix + a[1] * Iy
    vol = volume(P)
    kv = K * vol
    s_star = kv / (kv - pairing) if pairing < 0 else None
    H = None
    if isinstance(a[0], Fraction):
        H = AffineFunction(a, -min(dot(a, v) for v in P.vertices))
    return VFBoundResult(a, K, pairing, vol, s_star, (kv, pairing - kv), H)


def limit_slope(P: LatticePolygon, a: Sequence, s):
    """``s * I_H + (1 - s) * K * Vol`` for ``H = <a, x>``."""
    if not isinstance(s, float):
        s = as_rational(s)
    return vf_bound(P, a).slope(s)


def destabilizing_threshold(P: LatticePolygon, a: Sequence):
    """Smallest ``s`` with negative limit slope, or None when ``I_H >= 0``."""
    return vf_bound(P, a).s_star


@dataclass(frozen=True)
class DirectionSearch:
    direction: Optional[tuple[float, float]]
    threshold: Optional[float]
    theta: Optional[float]
    evaluations: int


class _FastThreshold:
    """Float evaluation of ``s*(cos t, sin t)`` for the direction search."""

    def __init__(self, P: LatticePolygon):
        self.verts = np.array([[float(x), float(y)] for x, y in P.vertices])
        wsum = []
        for i in range(len(P.vertices)):
            w1, w2 = P.edge_directions(i)
            wsum.append((w1[0] + w2[0], w1[1] + w2[1]))
        self.wsum = np.array(wsum, dtype=float)
        self.delzant = [abs(cross(*P.edge_directions(i))) == 1 for i in range(len(P.vertices))]
        Ix, Iy = _pairing_vector(P)
        self.pairing = np.array([float(Ix), float(Iy)])
        self.vol = float(volume(P))

    def __call__(self, theta: float) -> float:
        a = np.array([math.cos(theta), math.sin(theta)])
        pairing = float(a @ self.pairing)
        # exact zeros (symmetric polygons) come back as tiny float residues
        if pairing >= -1e-12:
            return math.inf
        i = int(np.argmin(self.verts @ a))
        if not self.delzant[i]:
            raise PolytopeError(f"vertex {tuple(self.verts[i])} is not Delzant")
        kv = max(float(self.wsum[i] @ a), 0.0) * self.vol
        return kv / (kv - pairing)


def optimize_direction(
    P: LatticePolygon, coarse_steps: int = 64, refine_tolerance: float = 1e-10
) -> DirectionSearch:
    """Minimise ``s*(a)`` over unit directions ``a = (cos t, sin t)``.

    Coarse grid over ``t`` then golden-section search in the two cells around
    the best grid point.  ``s*`` is invariant under positive rescaling of
    ``a`` so unit directions lose nothing.  Directions with ``I_H >= 0`` give
    no obstruction and are skipped.
    """
    if coarse_steps < 8:
        raise ValueError("coarse_steps must be at least 8")
    if refine_tolerance <= 0:
        raise ValueError("refine_tolerance must be positive")
    f = _FastThreshold(P)
    step = 2 * math.pi / coarse_steps
    grid = [f(j * step) for j in range(coarse_steps)]
    evals = coarse_steps
    j = min(range(coarse_steps), key=lambda i: grid[i])
    if math.isinf(grid[j]):
        return DirectionSearch(None, None, None, evals)

    best_t, best_v = j * step, grid[j]
    lo, hi = (j - 1) * step, (j + 1) * step
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals += 2
    for _ in range(300):
        for t, v in ((x1, f1), (x2, f2)):
            if v < best_v:
                best_t, best_v = t, v
        if hi - lo < 1e-15:
            break
        if abs(f1 - f2) < refine_tolerance and abs(f(lo) - f(hi)) < refine_tolerance:
            evals += 2
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        evals += 1
    best_t = best_t % (2 * math.pi)
    return DirectionSearch((math.cos(best_t), math.sin(best_t)), best_v, best_t, evals)


def facet_directions(P: LatticePolygon) -> list[tuple[int, int]]:
    """Inward facet normals; each makes the corresponding edge the minimising face."""
    return [(-f.normal[0], -f.normal[1]) for f in P.facets]


def best_facet_bound(P: LatticePolygon) -> Optional[VFBoundResult]:
    """Exact ``s*`` minimised over the inward facet normals of P."""
    best = None
    for a in facet_directions(P):
        r = vf_bound(P, a)
        if r.s_star is not None and (best is None or r.s_star < best.s_star):
            best = r
    return best
