"""Numerical cross-check of the toric pairing through Abreu's scalar curvature.

The Guillemin potential ``u = 1/2 sum l_i log l_i`` of a polygon defines a
toric Kaehler metric whose scalar curvature is

    S = -1/2 sum_{j,k} d^2 (u^{jk}) / dx_j dx_k

with ``u^{jk}`` the inverse Hessian.  For affine ``H``,
``int_P S H dmu = int_{dP} H dsigma``; this module integrates the left side
numerically and compares it with the exact right side.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .polytope import (
    AffineFunction,
    LatticePolygon,
    integrate_affine_boundary,
    shrink,
)


class ClearanceError(ValueError):
    """Finite-difference stencil would leave the polygon."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved relative error {achieved:.3e})")
        self.achieved = achieved


def thread_count() -> int:
    env = os.environ.get("RICCI_LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class QuadratureSpec:
    triangulation_depth: int = 6
    boundary_offset: float = 1e-2
    fd_step: float = 1e-3
    # Gauss-Legendre points per direction of the collapsed-square rule
    gauss_order: int = 4

    def __post_init__(self):
        if self.boundary_offset <= 0 or self.fd_step <= 0:
            raise ValueError("boundary_offset and fd_step must be positive")
        if not self.fd_step < self.boundary_offset / 4:
            raise ValueError("fd_step must be below boundary_offset / 4")
        if self.triangulation_depth < 0 or self.gauss_order < 1:
            raise ValueError("depth must be >= 0 and gauss_order >= 1")


class GuilleminPotential:
    """Canonical symplectic potential of a polygon, vectorised over points."""

    def __init__(self, P: LatticePolygon):
        self.polygon = P
        self.normals = np.array([f.normal for f in P.facets], dtype=float)
        self.supports = np.array([float(f.support) for f in P.facets])

    def facet_values(self, x: np.ndarray) -> np.ndarray:
        """``l_i(x) = a_i - <u_i, x>``, shape ``(..., m)``."""
        return self.supports - np.asarray(x, dtype=float) @ self.normals.T

    def value(self, x) -> np.ndarray:
        l = self.facet_values(x)
        return 0.5 * np.sum(l * np.log(l), axis=-1)

    def _hess(self, x: np.ndarray) -> np.ndarray:
        inv_l = 1.0 / self.facet_values(x)
        return 0.5 * np.einsum("...i,ij,ik->...jk", inv_l, self.normals, self.normals)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(self.facet_values(x) <= 0):
            raise ClearanceError("point is on or outside the boundary")
        return self._hess(x)

    def inverse_hessian(self, x: np.ndarray) -> np.ndarray:
        g = self._hess(x)
        a, b, d = g[..., 0, 0], g[..., 0, 1], g[..., 1, 1]
        det = a * d - b * b
        out = np.empty_like(g)
        out[..., 0, 0] = d / det
        out[..., 1, 1] = a / det
        out[..., 0, 1] = out[..., 1, 0] = -b / det
        return out


def _abreu_fd(G: GuilleminPotential, x: np.ndarray, h: float) -> np.ndarray:
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    inv = G.inverse_hessian
    c = inv(x)
    d11 = (inv(x + ex)[..., 0, 0] - 2 * c[..., 0, 0] + inv(x - ex)[..., 0, 0]) / h**2
    d22 = (inv(x + ey)[..., 1, 1] - 2 * c[..., 1, 1] + inv(x - ey)[..., 1, 1]) / h**2
    d12 = (
        inv(x + ex + ey)[..., 0, 1]
        - inv(x + ex - ey)[..., 0, 1]
        - inv(x - ex + ey)[..., 0, 1]
        + inv(x - ex - ey)[..., 0, 1]
    ) / (4 * h**2)
    return -0.5 * (d11 + d22 + 2 * d12)


def scalar_curvature(G: GuilleminPotential, x, spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Abreu scalar curvature by central differences plus one Richardson step."""
    x = np.asarray(x, dtype=float)
    h = spec.fd_step
    l = G.facet_values(x)
    # the stencil moves each l_i by at most h * |u_i|_1
    reach = h * np.abs(G.normals).sum(axis=1)
    if np.any(l <= 2 * h) or np.any(l <= reach):
        raise ClearanceError(f"need l_i(x) > 2h = {2 * h:g} for the difference stencil")
    return (4 * _abreu_fd(G, x, h / 2) - _abreu_fd(G, x, h)) / 3


def _reference_rule(depth: int, order: int):
    """Nodes ``(xi, eta)`` and weights on the unit triangle.

    The triangle is cut into ``4**depth`` congruent pieces, each carrying a
    collapsed Gauss-Legendre product rule.
    """
    g, w = np.polynomial.legendre.leggauss(order)
    g, w = (g + 1) / 2, w / 2
    s, t = np.meshgrid(g, g, indexing="ij")
    ws = np.outer(w, w) * (1 - s)
    loc = np.stack([s.ravel(), (t * (1 - s)).ravel()], axis=1)
    ws = ws.ravel()

    n = 2**depth
    tris = []
    for i in range(n):
        for j in range(n - i):
            tris.append(((i, j), (i + 1, j), (i, j + 1)))
            if i + j < n - 1:
                tris.append(((i + 1, j), (i + 1, j + 1), (i, j + 1)))
    tris = np.array(tris, dtype=float) / n
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    nodes = a[:, None, :] + loc[:, 0, None] * (b - a)[:, None, :] + loc[:, 1, None] * (c - a)[:, None, :]
    # every piece has area 1 / (2 n^2); the local rule integrates over area 1/2
    weights = np.broadcast_to(ws / n**2, nodes.shape[:2])
    return nodes.reshape(-1, 2), weights.reshape(-1)


def quadrature_nodes(P: LatticePolygon, spec: QuadratureSpec):
    ref, wref = _reference_rule(spec.triangulation_depth, spec.gauss_order)
    verts = np.array([[float(x), float(y)] for x, y in P.vertices])
    pts, wts = [], []
    for i in range(1, len(verts) - 1):
        A, B, C = verts[0], verts[i], verts[i + 1]
        jac = abs((B - A)[0] * (C - A)[1] - (B - A)[1] * (C - A)[0])
        pts.append(A + ref[:, :1] * (B - A) + ref[:, 1:] * (C - A))
        wts.append(wref * jac)
    return np.concatenate(pts), np.concatenate(wts)


def _integrate_sh(G: GuilleminPotential, P: LatticePolygon, H: AffineFunction, spec: QuadratureSpec) -> float:
    x, w = quadrature_nodes(P, spec)
    if np.linalg.eigvalsh(G.hessian(x)).min() <= 0:
        raise ArithmeticError("Guillemin Hessian is not positive definite at a node")
    chunks = np.array_split(np.arange(len(x)), max(1, min(thread_count(), len(x) // 2048)))
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        S = np.concatenate(list(pool.map(lambda idx: scalar_curvature(G, x[idx], spec), chunks)))
    grad = np.array([float(c) for c in H.gradient])
    vals = S * (x @ grad + float(H.constant)) * w
    return math.fsum(vals.tolist())


@dataclass(frozen=True)
class PairingCheck:
    lhs: float
    rhs: Fraction
    relative_error: float
    # the two shrink levels before extrapolation
    shrunk: tuple
    nodes: int
    seconds: float


def check_affine_pairing(
    G: GuilleminPotential | LatticePolygon,
    H: AffineFunction,
    spec: QuadratureSpec = QuadratureSpec(),
    tolerance: Optional[float] = None,
) -> PairingCheck:
    """Compare numerical ``int_P S H dmu`` with the exact ``int_{dP} H dsigma``.

    The integral is taken over the polygons shrunk by ``rho`` and ``rho/2``
    and extrapolated linearly to ``rho = 0``.  The error is
    ``|lhs - rhs| / (1 + |rhs|)``; if ``tolerance`` is given and exceeded a
    :class:`ConvergenceError` is raised.
    """
    if isinstance(G, LatticePolygon):
        G = GuilleminPotential(G)
    P = G.polygon
    t0 = time.perf_counter()
    rho = Fraction(repr(spec.boundary_offset))
    levels = []
    nodes = 0
    for r in (rho, rho / 2):
        Pr = shrink(P, r)
        levels.append(_integrate_sh(G, Pr, H, spec))
        nodes += len(quadrature_nodes(Pr, spec)[1])
    lhs = 2 * levels[1] - levels[0]
    rhs = integrate_affine_boundary(P, H)
    err = abs(lhs - float(rhs)) / (1 + abs(float(rhs)))
    check = PairingCheck(lhs, rhs, err, tuple(levels), nodes, time.perf_counter() - t0)
    if tolerance is not None and not err < tolerance:
        raise ConvergenceError("Abreu pairing check failed", err)
    return check


def curvature_samples(G: GuilleminPotential | LatticePolygon, spec: QuadratureSpec = QuadratureSpec(), n: int = 40):
    """``(x, y, S)`` on a regular grid, restricted to the ``rho``-shrunk polygon."""
    if isinstance(G, LatticePolygon):
        G = GuilleminPotential(G)
    verts = np.array([[float(x), float(y)] for x, y in G.polygon.vertices])
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    xs, ys = np.meshgrid(np.linspace(lo[0], hi[0], n), np.linspace(lo[1], hi[1], n), indexing="ij")
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1)
    pts = pts[(G.facet_values(pts) > spec.boundary_offset).all(axis=1)]
    return pts, scalar_curvature(G, pts, spec)
