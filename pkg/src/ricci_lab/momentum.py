"""Momentum-construction metrics on P(O(-1) + O), i.e. P^2 blown up once.

A profile ``phi`` on ``[0, 2]`` defines a circle-invariant metric.  We work
with ``Q(tau) = (1 + tau) * phi(tau)`` since the Ricci form is expressed
through

    C(tau) = Q'(tau) / (2 (1 + tau))

as ``rho = (2 - C) p*omega_0 - phi * C' * (fibre form)``.  The condition
``Ric >= t * omega`` is the pair of inequalities

    A(tau) = 2 - C(tau) >= t (1 + tau),        -C'(tau) >= t.

Profiles are either exact piecewise polynomials (rational coefficients) or
sampled, in which case ``Q`` is interpolated by a cubic spline.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .polytope import as_rational

TAU_MAX = Fraction(2)
SMOOTH_SLOPES = (Fraction(2), Fraction(-2))


class ProfileError(ValueError):
    pass


class PerturbationError(ProfileError):
    """An eta constraint failed; carries the constraint name and location."""

    def __init__(self, constraint: str, value, location):
        super().__init__(f"eta constraint {constraint!r} violated: value {value} at tau={location}")
        self.constraint = constraint
        self.value = value
        self.location = location


class Poly:
    """Dense polynomial with coefficients listed from the constant term up."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = (0,)):
        c = [as_rational(x) for x in coeffs] or [Fraction(0)]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __call__(self, x):
        acc = 0 * x
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return Poly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    def scale(self, k) -> "Poly":
        k = as_rational(k)
        return Poly([k * a for a in self.c])

    def deriv(self, m: int = 1) -> "Poly":
        p = self
        for _ in range(m):
            p = Poly([i * a for i, a in enumerate(p.c)][1:] or [0])
        return p

    def integ(self) -> "Poly":
        """Antiderivative vanishing at 0."""
        return Poly([0] + [a / (i + 1) for i, a in enumerate(self.c)])

    def compose_affine(self, shift, width) -> "Poly":
        """``x -> self((x - shift) / width)``."""
        lin = Poly([-as_rational(shift) / as_rational(width), 1 / as_rational(width)])
        acc = Poly([0])
        for a in reversed(self.c):
            acc = acc * lin + Poly([a])
        return acc

    def as_float(self) -> np.ndarray:
        # numpy.polyval wants the leading coefficient first
        return np.array([float(a) for a in reversed(self.c)])


ONE_PLUS_TAU = Poly([1, 1])


@dataclass
class MomentumProfile:
    """Profile ``phi`` on ``[0, 2]`` stored through ``Q = (1 + tau) phi``.

    Polynomial mode keeps breakpoints ``0 = b_0 < ... < b_m = 2`` and one
    exact polynomial piece of ``Q`` per interval.  Sampled mode keeps a
    not-a-knot cubic spline of ``Q``.
    """

    breaks: tuple = (Fraction(0), TAU_MAX)
    pieces: tuple = ()
    spline: Optional[CubicSpline] = None
    label: str = ""
    # filled in by perturbation(): eta pieces and the verified constraints
    eta: Optional[tuple] = None
    constraints: dict = field(default_factory=dict)
    _float_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def from_q_coeffs(cls, coeffs: Sequence, label: str = "") -> "MomentumProfile":
        """``Q = sum_k coeffs[k-1] tau^k``; no constant term, so ``phi(0) = 0``."""
        return cls(pieces=(Poly([0, *coeffs]),), label=label)

    @classmethod
    def from_pieces(cls, breaks, pieces, label: str = "", **kw) -> "MomentumProfile":
        breaks = tuple(as_rational(b) for b in breaks)
        if breaks[0] != 0 or breaks[-1] != TAU_MAX or len(pieces) != len(breaks) - 1:
            raise ProfileError("breakpoints must run from 0 to 2, one piece per interval")
        if any(b >= c for b, c in zip(breaks, breaks[1:])):
            raise ProfileError("breakpoints must increase")
        return cls(breaks=breaks, pieces=tuple(pieces), label=label, **kw)

    @classmethod
    def from_phi(cls, phi: Poly, label: str = "") -> "MomentumProfile":
        return cls(pieces=(ONE_PLUS_TAU * phi,), label=label)

    @classmethod
    def from_samples(cls, samples, label: str = "") -> "MomentumProfile":
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 4:
            raise ProfileError("samples must be at least 4 (tau, phi) pairs")
        order = np.argsort(arr[:, 0])
        tau, phi = arr[order, 0], arr[order, 1]
        if np.any(np.diff(tau) <= 0):
            raise ProfileError("sample abscissae must be distinct")
        if abs(tau[0]) > 1e-12 or abs(tau[-1] - 2) > 1e-12:
            raise ProfileError("samples must cover [0, 2]")
        return cls(spline=CubicSpline(tau, (1 + tau) * phi, bc_type="not-a-knot"), label=label)

    @property
    def sampled(self) -> bool:
        return self.spline is not None

    def _piece(self, tau) -> Poly:
        i = bisect.bisect_right(self.breaks, tau) - 1
        return self.pieces[min(max(i, 0), len(self.pieces) - 1)]

    def q(self, tau, nu: int = 0):
        """``Q^(nu)(tau)``; exact for rational ``tau`` in polynomial mode."""
        if self.sampled:
            return float(self.spline(float(tau), nu))
        return self._piece(tau).deriv(nu)(tau)

    def q_array(self, tau: np.ndarray, nu: int = 0) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if self.sampled:
            return self.spline(tau, nu)
        out = np.empty_like(tau)
        edges = np.array([float(b) for b in self.breaks])
        idx = np.clip(np.searchsorted(edges, tau, side="right") - 1, 0, len(self.pieces) - 1)
        for k, coeffs in enumerate(self._local_float(nu)):
            m = idx == k
            if m.any():
                out[m] = np.polyval(coeffs, tau[m] - edges[k])
        return out

    def _local_float(self, nu: int) -> list:
        # pieces re-expanded about their left breakpoint: narrow pieces have
        # huge global coefficients that cancel badly in floating point
        if nu not in self._float_cache:
            self._float_cache[nu] = [
                p.deriv(nu).compose_affine(-b, 1).as_float() for p, b in zip(self.pieces, self.breaks)
            ]
        return self._float_cache[nu]

    def phi(self, tau):
        return self.q(tau) / (1 + tau)

    def phi_prime(self, tau):
        return (self.q(tau, 1) * (1 + tau) - self.q(tau)) / (1 + tau) ** 2

    def boundary_data(self) -> dict:
        z, two = (0.0, 2.0) if self.sampled else (Fraction(0), TAU_MAX)
        return {
            "phi(0)": self.phi(z),
            "phi(2)": self.phi(two),
            "phi'(0)": self.phi_prime(z),
            "phi'(2)": self.phi_prime(two),
        }

    @property
    def is_smooth_metric(self) -> bool:
        """Exact check of ``phi(0)=phi(2)=0, phi'(0)=2, phi'(2)=-2``."""
        b = self.boundary_data()
        return (b["phi(0)"], b["phi(2)"], b["phi'(0)"], b["phi'(2)"]) == (0, 0, *SMOOTH_SLOPES)


def _coefficients(phi: MomentumProfile, tau):
    q1, q2 = phi.q(tau, 1), phi.q(tau, 2)
    C = q1 / (2 * (1 + tau))
    minus_c_prime = (q1 - (1 + tau) * q2) / (2 * (1 + tau) ** 2)
    return 2 - C, minus_c_prime


def ricci_coefficients(phi: MomentumProfile, tau):
    """``(A(tau), -C'(tau))`` at an interior point of ``(0, 2)``."""
    if not isinstance(tau, float):
        tau = as_rational(tau)
    if not 0 < tau < 2:
        raise ProfileError(f"tau={tau} outside the open interval (0, 2)")
    return _coefficients(phi, tau)


@dataclass
class RicciInequalityReport:
    grid: list
    base_coefficient: list
    fiber_coefficient: list
    t_max: object
    location: object
    # "base" or "fiber": which inequality attains the infimum
    binding: str

    @property
    def base_margin(self) -> list:
        """``A / (1 + tau)``: the largest t allowed by the first inequality."""
        return [a / (1 + t) for a, t in zip(self.base_coefficient, self.grid)]

    def rows(self):
        for t, a, c in zip(self.grid, self.base_coefficient, self.fiber_coefficient):
            yield t, a, c


def _grid(n: int, exact: bool):
    if exact:
        return [Fraction(2 * i, n) for i in range(n + 1)]
    return list(np.linspace(0.0, 2.0, n + 1))


def _evaluate(phi: MomentumProfile, grid_size: int, exact: bool):
    grid = _grid(grid_size, exact)
    if exact:
        qs = [phi.q(t) for t in grid]
        coeffs = [_coefficients(phi, t) for t in grid]
        A = [c[0] for c in coeffs]
        F = [c[1] for c in coeffs]
    else:
        tau = np.asarray(grid)
        qs = phi.q_array(tau)
        q1, q2 = phi.q_array(tau, 1), phi.q_array(tau, 2)
        A = list(2 - q1 / (2 * (1 + tau)))
        F = list((q1 - (1 + tau) * q2) / (2 * (1 + tau) ** 2))
        qs = list(qs)
    return grid, qs, A, F


def ricci_lower_bound(
    phi: MomentumProfile, grid_size: int = 4096, exact: Optional[bool] = None
) -> RicciInequalityReport:
    """Largest ``t`` with ``Ric >= t omega`` at every point of a uniform grid.

    Endpoint values are one-sided limits; the closed forms have no pole at
    ``tau = 0, 2`` so they are evaluated directly.  ``exact`` defaults to
    rational arithmetic in polynomial mode.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    if exact is None:
        exact = not phi.sampled
    if exact and phi.sampled:
        raise ValueError("sampled profiles cannot be evaluated exactly")
    grid, qs, A, F = _evaluate(phi, grid_size, exact)
    for t, q in zip(grid[1:-1], qs[1:-1]):
        if q <= 0:
            raise ProfileError(f"profile is not positive at tau={t}")
    best, where, binding = None, None, ""
    for t, a, f in zip(grid, A, F):
        base = a / (1 + t)
        for val, kind in ((base, "base"), (f, "fiber")):
            if best is None or val < best:
                best, where, binding = val, t, kind
    if not exact:
        best, where = float(best), float(where)
    return RicciInequalityReport(grid, A, F, best, where, binding)


def equality_profile(t) -> MomentumProfile:
    """Solve ``-C' = t`` with ``phi(0) = phi(2) = 0``.

    ``Q = 2c tau + (c - t) tau^2 - (2t/3) tau^3`` with ``c = 7t/6``.  Only
    ``t = 6/7`` gives ``phi'(0) = 2``; the far end then has slope ``-10/7``.
    """
    t = as_rational(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    c = 7 * t / 6
    return MomentumProfile.from_q_coeffs([2 * c, c - t, -2 * t / 3], label=f"psi_{t}")


def smooth_equality_t() -> Fraction:
    """The ``t`` for which the equality profile closes up smoothly at ``tau = 0``.

    ``phi'(0)`` of :func:`equality_profile` is linear in ``t``; solve
    ``phi'(0) = 2`` from its values at ``t = 0`` and ``t = 1``.
    """
    s0 = equality_profile(0).phi_prime(Fraction(0))
    s1 = equality_profile(1).phi_prime(Fraction(0))
    return (SMOOTH_SLOPES[0] - s0) / (s1 - s0)


# smoothstep ramp h(r) = 3r^2 - 2r^3 and its antiderivative
_RAMP = Poly([0, 0, 3, -2])
# unit-mass bump 30 s^2 (1-s)^2 on [0, 1] and its antiderivative
_BUMP = Poly([0, 0, 30, -60, 30])
_END_SLOPE_FIX = Fraction(-4, 7)


def _eta_pieces(eps: Fraction):
    """Piecewise eta with eta(0)=eta(2)=0, eta'(0)=0, eta'(2)=-4/7.

    The ramp brings eta' from 0 down to -4/7 on ``[2-eps, 2]``; a bump on
    ``[eps, 2-2eps]`` carries exactly the mass the ramp removes.
    """
    length = TAU_MAX - 3 * eps
    mass = -_END_SLOPE_FIX * eps * _RAMP.integ()(Fraction(1))
    zero = Poly([0])
    rise = _BUMP.integ().scale(mass).compose_affine(eps, length)
    plateau = Poly([mass])
    fall = plateau + _RAMP.integ().scale(_END_SLOPE_FIX * eps).compose_affine(TAU_MAX - eps, eps)
    breaks = (Fraction(0), eps, TAU_MAX - 2 * eps, TAU_MAX - eps, TAU_MAX)
    return breaks, (zero, rise, plateau, fall)


def _check_eta(breaks, pieces, delta: Fraction, grid_size: int) -> dict:
    eta = MomentumProfile(breaks=breaks, pieces=pieces)
    z, two = Fraction(0), TAU_MAX
    checks = {
        "eta(0)=0": (eta.q(z), z),
        "eta(2)=0": (eta.q(two), two),
        "eta'(0)=0": (eta.q(z, 1), z),
        "eta'(2)=-4/7": (eta.q(two, 1) - _END_SLOPE_FIX, two),
    }
    report = {}
    for name, (val, loc) in checks.items():
        report[name] = (val == 0, val, loc)
    grid = _grid(grid_size, exact=True)
    for name, nu, bad in (
        ("eta>=0", 0, lambda v: v < 0),
        ("eta'<delta", 1, lambda v: v >= delta),
        ("eta''<delta", 2, lambda v: v >= delta),
    ):
        vals = [eta.q(t, nu) for t in grid]
        k = min(range(len(grid)), key=vals.__getitem__) if nu == 0 else max(range(len(grid)), key=vals.__getitem__)
        report[name] = (not bad(vals[k]), vals[k], grid[k])
    return report


def perturbation(delta, eps, grid_size: int = 4096) -> MomentumProfile:
    """``psi_{6/7} + eta``: a smooth-metric profile with ``Ric >= (6/7 - O(eps)) omega``.

    ``eps`` is the width of the ramp; if the resulting ``eta'`` or ``eta''``
    is not below ``delta`` it is retried with ``eps = delta / 10``.
    """
    delta, eps = as_rational(_tidy(delta)), as_rational(_tidy(eps))
    if not 0 < delta < Fraction(1, 10):
        raise ValueError("delta must lie in (0, 1/10)")
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2)")
    for attempt in (eps, min(eps, delta / 10)):
        breaks, eta = _eta_pieces(attempt)
        report = _check_eta(breaks, eta, delta, grid_size)
        if all(ok for ok, _, _ in report.values()):
            break
    else:
        name = next(k for k, (ok, _, _) in report.items() if not ok)
        raise PerturbationError(name, report[name][1], report[name][2])

    psi = equality_profile(smooth_equality_t()).pieces[0]
    pieces = tuple(psi + ONE_PLUS_TAU * e for e in eta)
    profile = MomentumProfile.from_pieces(
        breaks, pieces, label=f"psi+eta(delta={delta}, eps={attempt})", eta=eta, constraints=report
    )
    if not profile.is_smooth_metric:
        raise ProfileError("perturbed profile lost its boundary conditions")
    return profile


def _tidy(x):
    # 1e-3 should mean 1/1000, not its binary neighbour
    return repr(x) if isinstance(x, float) else x


def eta_profile(profile: MomentumProfile) -> MomentumProfile:
    """The perturbation ``eta`` of a :func:`perturbation` output, as a profile of ``Q = eta``."""
    if profile.eta is None:
        raise ProfileError("profile carries no perturbation")
    return MomentumProfile(breaks=profile.breaks, pieces=profile.eta)


def implication_check(phi: MomentumProfile, t, grid_size: int = 1024, exact: Optional[bool] = None) -> bool:
    """Grid test of "second inequality implies the first" for ``t <= 1``.

    True when ``-C' < t`` somewhere on the grid, or ``A >= t (1 + tau)``
    everywhere on it.
    """
    if exact is None:
        exact = not phi.sampled
    if exact:
        t = as_rational(_tidy(t))
    if t > 1:
        raise ValueError("t must be at most 1")
    grid, _, A, F = _evaluate(phi, grid_size, exact)
    if any(f < t for f in F):
        return True
    return all(a >= t * (1 + x) for a, x in zip(A, grid))


def cone_angle(end_slope: float) -> float:
    """``2 arcsin(sqrt(|slope| / 2))`` for an end slope in ``[-2, 0]``."""
    s = float(end_slope)
    if not -2 <= s <= 0:
        raise ValueError(f"end slope {end_slope} outside [-2, 0]")
    return 2 * math.asin(math.sqrt(abs(s) / 2))
