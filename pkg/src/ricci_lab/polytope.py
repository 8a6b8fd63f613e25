"""Exact rational geometry of lattice polygons.

A :class:`LatticePolygon` is the moment polygon of a toric surface.  All
integrals here are exact: affine integrands against the Lebesgue measure
``dmu`` on the interior, and against the boundary measure ``dsigma`` which
gives an edge of lattice length ``L`` total mass ``L``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, Fraction]

# Dimension of the polygons handled here.
DIM = 2


class PolytopeError(ValueError):
    """Invalid polygon input (non-convex, degenerate, repeated vertices)."""


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"3/7"``, ``[num, den]`` pairs and floats.

    Floats are converted exactly (binary value), not rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise PolytopeError(f"non-finite coordinate {value!r}")
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if int(den) == 0:
            raise PolytopeError("zero denominator")
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def as_vector(value) -> Vec:
    x, y = value
    return (as_rational(x), as_rational(y))


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _sub(a, b) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def primitive_direction(d: Vec) -> tuple[tuple[int, int], Fraction]:
    """Split a nonzero rational vector as ``d = content * e``.

    ``e`` is a primitive integer vector and ``content`` a positive rational;
    for an integer vector the content is the gcd of its entries.
    """
    dx, dy = Fraction(d[0]), Fraction(d[1])
    if dx == 0 and dy == 0:
        raise PolytopeError("zero vector has no primitive direction")
    den = math.lcm(dx.denominator, dy.denominator)
    ix, iy = int(dx * den), int(dy * den)
    g = math.gcd(ix, iy)
    e = (ix // g, iy // g)
    return e, Fraction(g, den)


@dataclass(frozen=True)
class AffineFunction:
    """``H(x) = <gradient, x> + constant`` with rational data."""

    gradient: Vec
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "gradient", as_vector(self.gradient))
        object.__setattr__(self, "constant", as_rational(self.constant))

    @classmethod
    def linear(cls, ax, ay) -> "AffineFunction":
        return cls((ax, ay), 0)

    @classmethod
    def const(cls, c) -> "AffineFunction":
        return cls((0, 0), c)

    def __call__(self, x):
        return dot(self.gradient, x) + self.constant

    def __add__(self, other):
        if isinstance(other, AffineFunction):
            g = (self.gradient[0] + other.gradient[0], self.gradient[1] + other.gradient[1])
            return AffineFunction(g, self.constant + other.constant)
        return AffineFunction(self.gradient, self.constant + as_rational(other))

    __radd__ = __add__

    def __mul__(self, k):
        k = as_rational(k)
        return AffineFunction((k * self.gradient[0], k * self.gradient[1]), k * self.constant)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1


@dataclass(frozen=True)
class Facet:
    """Edge ``{<normal, x> = support}`` with ``<normal, x> <= support`` on P."""

    normal: tuple[int, int]
    support: Fraction
    lattice_length: Fraction


@dataclass(frozen=True)
class PolytopeMeasureReport:
    volume: Fraction
    boundary_mass: Fraction
    barycenter: Vec


@dataclass(frozen=True)
class LatticePolygon:
    """Convex polygon with counter-clockwise rational vertices.

    Facet ``i`` is the edge from ``vertices[i]`` to ``vertices[i + 1]``.
    Build instances with :func:`from_vertices`.
    """

    vertices: tuple[Vec, ...]
    facets: tuple[Facet, ...]

    @property
    def dimension(self) -> int:
        return DIM

    def __len__(self):
        return len(self.vertices)

    def edge_directions(self, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """Primitive directions of the two edges leaving vertex ``i``.

        Returned as (towards next vertex, towards previous vertex).
        """
        n = len(self.vertices)
        e_next, _ = primitive_direction(_sub(self.vertices[(i + 1) % n], self.vertices[i]))
        e_prev, _ = primitive_direction(_sub(self.vertices[i - 1], self.vertices[i]))
        return e_next, e_prev

    def delzant_violations(self) -> list[int]:
        """Indices of vertices whose edge directions are not a lattice basis."""
        bad = []
        for i in range(len(self.vertices)):
            w1, w2 = self.edge_directions(i)
            if abs(cross(w1, w2)) != 1:
                bad.append(i)
        return bad

    @property
    def is_delzant(self) -> bool:
        return not self.delzant_violations()

    def contains(self, x, strict: bool = False) -> bool:
        for f in self.facets:
            val = dot(f.normal, x)
            if val > f.support or (strict and val == f.support):
                return False
        return True


def _ccw_sort(points: list[Vec]) -> list[Vec]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    rel = {p: (p[0] - cx, p[1] - cy) for p in points}

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(p, q):
        a, b = rel[p], rel[q]
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        c = cross(a, b)
        if c != 0:
            return -1 if c > 0 else 1
        # same ray from the centre: the polygon cannot be convex anyway
        return -1 if dot(a, a) < dot(b, b) else 1

    return sorted(points, key=functools.cmp_to_key(cmp))


def _shoelace(vertices: Sequence[Vec]) -> Fraction:
    n = len(vertices)
    twice = sum(cross(vertices[i], vertices[(i + 1) % n]) for i in range(n))
    return Fraction(twice, 2)


def from_vertices(vertices: Iterable) -> LatticePolygon:
    """Validate a vertex list and compute facets.

    The vertices may come in any order; the result is counter-clockwise and
    starts at the vertex with the smallest ``(y, x)``.  Collinear triples are
    rejected rather than merged.
    """
    pts = [as_vector(v) for v in vertices]
    if len(pts) < 3:
        raise PolytopeError("a polygon needs at least 3 vertices")
    if len(set(pts)) != len(pts):
        raise PolytopeError("repeated vertices")
    if all(cross(_sub(p, pts[0]), _sub(pts[1], pts[0])) == 0 for p in pts[2:]):
        raise PolytopeError("zero-area input: all vertices are collinear")

    pts = _ccw_sort(pts)
    start = min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))
    pts = pts[start:] + pts[:start]

    n = len(pts)
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        turn = cross(_sub(b, a), _sub(c, b))
        if turn == 0:
            raise PolytopeError(f"collinear vertices around {b}")
        if turn < 0:
            raise PolytopeError(f"non-convex input at vertex {b}")

    facets = []
    for i in range(n):
        v, w = pts[i], pts[(i + 1) % n]
        e, length = primitive_direction(_sub(w, v))
        normal = (e[1], -e[0])
        facets.append(Facet(normal, dot(normal, v), length))
    return LatticePolygon(tuple(pts), tuple(facets))


def from_facets(facets: Sequence[tuple[Sequence[int], object]]) -> LatticePolygon:
    """Polygon ``{<u_i, x> <= a_i}`` from facets listed counter-clockwise.

    Vertices are intersections of consecutive facet lines; used for shrunk
    polygons where every inequality is tightened.
    """
    m = len(facets)
    if m < 3:
        raise PolytopeError("need at least 3 facets")
    verts = []
    for i in range(m):
        (u1, a1), (u2, a2) = facets[i - 1], facets[i]
        a1, a2 = as_rational(a1), as_rational(a2)
        det = u1[0] * u2[1] - u1[1] * u2[0]
        if det == 0:
            raise PolytopeError("parallel consecutive facets")
        x = (a1 * u2[1] - a2 * u1[1]) / det
        y = (u1[0] * a2 - u2[0] * a1) / det
        verts.append((Fraction(x), Fraction(y)))
    return from_vertices(verts)


def shrink(P: LatticePolygon, rho) -> LatticePolygon:
    """The polygon ``{<u_i, x> <= a_i - rho}`` (lattice-distance shrink)."""
    rho = as_rational(rho)
    return from_facets([(f.normal, f.support - rho) for f in P.facets])


def volume(P: LatticePolygon) -> Fraction:
    return _shoelace(P.vertices)


def _fan(P: LatticePolygon):
    v0 = P.vertices[0]
    for i in range(1, len(P.vertices) - 1):
        yield v0, P.vertices[i], P.vertices[i + 1]


def integrate_affine_interior(P: LatticePolygon, H: AffineFunction) -> Fraction:
    """Exact ``int_P H dmu`` by fan triangulation and the centroid rule."""
    total = Fraction(0)
    for a, b, c in _fan(P):
        area = Fraction(cross(_sub(b, a), _sub(c, a)), 2)
        centroid = ((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3)
        total += area * H(centroid)
    return total


def integrate_affine_boundary(P: LatticePolygon, H: AffineFunction) -> Fraction:
    """Exact ``int_{dP} H dsigma``; each edge carries its lattice length as mass."""
    n = len(P.vertices)
    total = Fraction(0)
    for i, f in enumerate(P.facets):
        v, w = P.vertices[i], P.vertices[(i + 1) % n]
        total += f.lattice_length * (H(v) + H(w)) / 2
    return total


def futaki_pairing(P: LatticePolygon, H: AffineFunction) -> Fraction:
    """``n * int_P H dmu - int_{dP} H dsigma`` with ``n = 2``.

    For any toric metric in the anticanonical class this equals
    ``int_M H (n - S) omega^n / n!``.
    """
    return DIM * integrate_affine_interior(P, H) - integrate_affine_boundary(P, H)


def measures(P: LatticePolygon) -> PolytopeMeasureReport:
    vol = volume(P)
    one = AffineFunction.const(1)
    bx = integrate_affine_interior(P, AffineFunction.linear(1, 0)) / vol
    by = integrate_affine_interior(P, AffineFunction.linear(0, 1)) / vol
    return PolytopeMeasureReport(vol, integrate_affine_boundary(P, one), (bx, by))
