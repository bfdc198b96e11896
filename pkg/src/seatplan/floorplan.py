"""Floor plan model: obstacle polygons, seats, and collision predicates.

The on-disk format is a JSON document with top-level keys ``width``,
``height``, ``obstacles`` (array of arrays of [x, y] pairs) and ``seats``
(array of ``{id, kind, x, y}`` with kind "desk" or "office"). Unknown keys
are rejected. A FloorPlan is immutable after load and safe to share
between threads.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from seatplan import geometry
from seatplan.geometry import EPS

DESK = "desk"
OFFICE = "office"


class FloorPlanError(ValueError):
    """Malformed or invalid floor-plan document."""


@dataclass(frozen=True)
class Seat:
    id: str
    kind: str  # DESK or OFFICE
    pos: tuple  # (x, y)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple  # ((x, y), ...), implicitly closed

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class FloorPlan:
    width: float
    height: float
    obstacles: tuple  # of Polygon
    seats: tuple  # of Seat
    # flat (E, 4) array of obstacle edges [ax, ay, bx, by] for fast checks
    _edge_array: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        edges = []
        for poly in self.obstacles:
            for a, b in poly.edges():
                edges.append((a[0], a[1], b[0], b[1]))
        arr = np.asarray(edges, dtype=float) if edges else np.empty((0, 4))
        object.__setattr__(self, "_edge_array", arr)

    @property
    def desks(self):
        return [s for s in self.seats if s.kind == DESK]

    @property
    def offices(self):
        return [s for s in self.seats if s.kind == OFFICE]

    def seat_by_id(self, seat_id):
        for s in self.seats:
            if s.id == seat_id:
                return s
        raise KeyError(seat_id)


def _require_keys(obj, allowed, required, what):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise FloorPlanError(f"unknown keys in {what}: {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise FloorPlanError(f"missing keys in {what}: {sorted(missing)}")


def load_floorplan(source):
    """Parse and validate a floor-plan document.

    ``source`` is a bytes/str JSON payload or a readable binary stream.
    Raises FloorPlanError naming the offending element when a seat sits
    inside an obstacle, an id repeats, or a polygon is degenerate.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FloorPlanError(f"malformed floor-plan document: {exc}") from exc
    if not isinstance(doc, dict):
        raise FloorPlanError("floor-plan document must be an object")
    _require_keys(doc, ("width", "height", "obstacles", "seats"),
                  ("width", "height", "obstacles", "seats"), "floor plan")

    width = float(doc["width"])
    height = float(doc["height"])
    if width <= 0 or height <= 0:
        raise FloorPlanError("width and height must be positive")

    obstacles = []
    for idx, verts in enumerate(doc["obstacles"]):
        pts = tuple((float(x), float(y)) for x, y in verts)
        if len(pts) < 3:
            raise FloorPlanError(f"obstacle {idx}: fewer than 3 vertices")
        if not geometry.polygon_is_simple(pts):
            raise FloorPlanError(f"obstacle {idx}: degenerate or self-intersecting polygon")
        obstacles.append(Polygon(pts))

    seats = []
    seen = set()
    for rec in doc["seats"]:
        _require_keys(rec, ("id", "kind", "x", "y"), ("id", "kind", "x", "y"),
                      f"seat {rec.get('id', '?')}")
        sid = str(rec["id"])
        if sid in seen:
            raise FloorPlanError(f"duplicate seat id: {sid}")
        seen.add(sid)
        kind = rec["kind"]
        if kind not in (DESK, OFFICE):
            raise FloorPlanError(f"seat {sid}: kind must be 'desk' or 'office'")
        seats.append(Seat(sid, kind, (float(rec["x"]), float(rec["y"]))))

    plan = FloorPlan(width, height, tuple(obstacles), tuple(seats))
    for seat in seats:
        if not point_free(plan, seat.pos):
            raise FloorPlanError(f"seat {seat.id}: position {seat.pos} is not collision-free")
    return plan


def point_free(plan, p):
    """True iff p is inside the bounding box and strictly outside every obstacle.

    Boundary points (within EPS of an obstacle edge) count as blocked.
    """
    x, y = p
    if not (0.0 <= x <= plan.width and 0.0 <= y <= plan.height):
        return False
    for poly in plan.obstacles:
        if geometry.point_in_polygon(p, poly.vertices) >= 0:
            return False
    return True


def _segment_hits_edges(a, b, edges):
    """Vectorized conservative segment-vs-edge-set intersection test."""
    if edges.shape[0] == 0:
        return False
    ax, ay = a
    bx, by = b
    p1 = edges[:, 0:2]
    p2 = edges[:, 2:4]
    # signed perpendicular offsets of edge endpoints from line ab
    dxy = np.array([bx - ax, by - ay])
    nab = math.hypot(*dxy)
    if nab == 0.0:
        return False
    d3 = ((bx - ax) * (p1[:, 1] - ay) - (by - ay) * (p1[:, 0] - ax)) / nab
    d4 = ((bx - ax) * (p2[:, 1] - ay) - (by - ay) * (p2[:, 0] - ax)) / nab
    ex = p2[:, 0] - p1[:, 0]
    ey = p2[:, 1] - p1[:, 1]
    ne = np.hypot(ex, ey)
    ne[ne == 0.0] = 1.0
    d1 = (ex * (ay - p1[:, 1]) - ey * (ax - p1[:, 0])) / ne
    d2 = (ex * (by - p1[:, 1]) - ey * (bx - p1[:, 0])) / ne
    proper = (((d1 > EPS) & (d2 < -EPS)) | ((d1 < -EPS) & (d2 > EPS))) & (
        ((d3 > EPS) & (d4 < -EPS)) | ((d3 < -EPS) & (d4 > EPS))
    )
    if bool(proper.any()):
        return True
    # near-collinear or touching candidates need the exact scalar check
    suspect = (np.abs(d1) <= EPS) | (np.abs(d2) <= EPS) | (np.abs(d3) <= EPS) | (np.abs(d4) <= EPS)
    for i in np.nonzero(suspect)[0]:
        e1 = (edges[i, 0], edges[i, 1])
        e2 = (edges[i, 2], edges[i, 3])
        if geometry.segments_intersect(a, b, e1, e2):
            return True
    return False


def segment_free(plan, a, b):
    """True iff both endpoints are free and segment ab crosses no obstacle edge.

    Tangency to an edge or vertex counts as a collision (conservative).
    """
    if not point_free(plan, a) or not point_free(plan, b):
        return False
    return not _segment_hits_edges(a, b, plan._edge_array)
