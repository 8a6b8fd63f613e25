"""Upper and lower bounds for the greatest Ricci lower bound of toric del Pezzo surfaces."""

from .polytope import AffineFunction, LatticePolygon, from_vertices, futaki_pairing
from .toric_bound import destabilizing_threshold, optimize_direction, vf_bound
from .bounds import alpha_lower_bound, builtin, report

__all__ = [
    "AffineFunction",
    "LatticePolygon",
    "alpha_lower_bound",
    "builtin",
    "destabilizing_threshold",
    "from_vertices",
    "futaki_pairing",
    "optimize_direction",
    "report",
    "vf_bound",
]
