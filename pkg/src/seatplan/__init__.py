"""Seating allocation toolkit.

Estimates walkable pairwise seat distances on a floor plan with a sampled
roadmap, then assigns hierarchies of teams to desks and single-occupant
offices using exact and heuristic optimization.
"""

from seatplan.floorplan import FloorPlan, Polygon, Seat, load_floorplan
from seatplan.roadmap import (
    DistanceMatrix,
    Roadmap,
    RoadmapParams,
    all_pairs_seat_distances,
    generate_prm,
)
from seatplan.model import SaProblem, SolverParams, Team
from seatplan.solvers import SolveResult, solve
from seatplan.hierarchy import Hierarchy, df_hsa, load_hierarchy

__all__ = [
    "FloorPlan",
    "Polygon",
    "Seat",
    "load_floorplan",
    "RoadmapParams",
    "Roadmap",
    "DistanceMatrix",
    "generate_prm",
    "all_pairs_seat_distances",
    "Team",
    "SaProblem",
    "SolverParams",
    "SolveResult",
    "solve",
    "Hierarchy",
    "load_hierarchy",
    "df_hsa",
]
