"""Sampled roadmap construction and pairwise seat distances.

The roadmap is grown seat by seat: while a seat is unconnected and the
exploration-node budget K is not exhausted, a random free point is
sampled, the nearest exploration node is extended toward it by at most
``delta_c``, the new node is wired to every node within ``delta_c``
whose connecting segment is free, and the seat retries connecting to
the fresh node within radius ``delta_s``. The run is a deterministic
function of (plan, params, seed).
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, floyd_warshall

from seatplan.floorplan import point_free, segment_free

# Above this node count all-pairs switches from dense Floyd-Warshall to
# per-seat Dijkstra; both give identical values within 1e-9.
_DENSE_APSP_LIMIT = 600

SEAT = "seat"
EXPLORATION = "exploration"


@dataclass(frozen=True)
class RoadmapParams:
    K: int
    delta_c: float
    delta_s: float
    seed: int = 0

    def __post_init__(self):
        if self.K < 0 or self.delta_c <= 0 or self.delta_s <= 0:
            raise ValueError("require K >= 0, delta_c > 0, delta_s > 0")


@dataclass
class RoadmapNode:
    id: int
    pos: tuple
    origin: str  # SEAT or EXPLORATION
    seat_id: str = None  # set when origin == SEAT


@dataclass
class Roadmap:
    nodes: list  # of RoadmapNode
    edges: list  # of (u, v, weight), u < v, undirected
    unconnected_seats: list  # seat ids the budget did not reach

    @property
    def exploration_count(self):
        return sum(1 for n in self.nodes if n.origin == EXPLORATION)

    def seat_nodes(self):
        return [n for n in self.nodes if n.origin == SEAT]

    def degree(self, node_id):
        return sum(1 for u, v, _ in self.edges if u == node_id or v == node_id)


@dataclass
class DistanceMatrix:
    seat_ids: list
    dist: np.ndarray  # (|S|, |S|) float64, +inf for unreachable pairs
    connected: bool
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {sid: i for i, sid in enumerate(self.seat_ids)}

    def d(self, a, b):
        return float(self.dist[self._index[a], self._index[b]])

    def index(self, seat_id):
        return self._index[seat_id]


def _euclid(a, b):
    return math.hypot(b[0] - a[0], b[1] - a[1])


def cast(plan, from_pt, toward, delta_c):
    """Step from ``from_pt`` toward ``toward`` by at most delta_c.

    Returns the landing point if the whole segment is collision-free,
    else None. Precondition: point_free(from_pt).
    """
    d = _euclid(from_pt, toward)
    if d == 0.0:
        return from_pt if point_free(plan, from_pt) else None
    step = min(delta_c, d)
    target = (from_pt[0] + step * (toward[0] - from_pt[0]) / d,
              from_pt[1] + step * (toward[1] - from_pt[1]) / d)
    if segment_free(plan, from_pt, target):
        return target
    return None


class _Builder:
    """Mutable growing roadmap with an array mirror for nearest queries
    and a union-find tracking which nodes can reach the initial node."""

    def __init__(self, plan):
        self.plan = plan
        self.nodes = []
        self.edges = []
        self.positions = np.empty((0, 2))
        self.exploration_idx = []  # node ids of exploration nodes
        self._uf = []
        self._edge_set = set()

    def _find(self, i):
        root = i
        while self._uf[root] != root:
            root = self._uf[root]
        while self._uf[i] != root:
            self._uf[i], i = root, self._uf[i]
        return root

    def same_component(self, a, b):
        return self._find(a) == self._find(b)

    def add_node(self, pos, origin, seat_id=None):
        nid = len(self.nodes)
        self.nodes.append(RoadmapNode(nid, pos, origin, seat_id))
        self.positions = np.vstack([self.positions, [pos]])
        self._uf.append(nid)
        if origin == EXPLORATION:
            self.exploration_idx.append(nid)
        return nid

    def add_edge(self, u, v):
        if u == v:
            return
        a, b = (u, v) if u < v else (v, u)
        if (a, b) in self._edge_set:
            return
        self._edge_set.add((a, b))
        w = _euclid(self.nodes[a].pos, self.nodes[b].pos)
        self.edges.append((a, b, w))
        self._uf[self._find(a)] = self._find(b)

    def nearest_exploration(self, p):
        idx = np.asarray(self.exploration_idx)
        d = np.hypot(self.positions[idx, 0] - p[0], self.positions[idx, 1] - p[1])
        return int(idx[int(np.argmin(d))])

    def nodes_within(self, p, radius, exclude=None):
        d = np.hypot(self.positions[:, 0] - p[0], self.positions[:, 1] - p[1])
        ids = np.nonzero(d <= radius)[0]
        return [int(i) for i in ids if i != exclude]


def _sample_free(plan, rng):
    while True:
        p = (float(rng.uniform(0.0, plan.width)), float(rng.uniform(0.0, plan.height)))
        if point_free(plan, p):
            return p


def connect_seat(plan, seat_node_id, candidate_ids, builder, delta_s):
    """Wire a seat to every candidate within delta_s with a free segment.

    Returns True iff the seat ends up attached to the roadmap's reachable
    component (the one containing the initial node) — seat-to-seat edges
    alone do not count until that island touches the main component.
    """
    spos = builder.nodes[seat_node_id].pos
    for cid in candidate_ids:
        if cid == seat_node_id:
            continue
        cpos = builder.nodes[cid].pos
        if _euclid(spos, cpos) <= delta_s and segment_free(plan, spos, cpos):
            builder.add_edge(seat_node_id, cid)
    return builder.same_component(seat_node_id, 0)


def generate_prm(plan, params):
    """Build the roadmap connecting all seats with at most K extra nodes.

    Seats the budget failed to connect are listed in
    ``Roadmap.unconnected_seats`` rather than raised; callers can retry
    with a larger K.
    """
    rng = np.random.default_rng(params.seed)
    builder = _Builder(plan)

    builder.add_node(_sample_free(plan, rng), EXPLORATION)

    seat_node = {}
    for seat in plan.seats:
        seat_node[seat.id] = builder.add_node(seat.pos, SEAT, seat.id)

    def grow():
        """One extension step; returns the new node id or None."""
        x_rand = _sample_free(plan, rng)
        n_nearest = builder.nearest_exploration(x_rand)
        x_new = cast(plan, builder.nodes[n_nearest].pos, x_rand, params.delta_c)
        if x_new is None:
            return None
        new_id = builder.add_node(x_new, EXPLORATION)
        for other in builder.nodes_within(x_new, params.delta_c, exclude=new_id):
            if segment_free(plan, x_new, builder.nodes[other].pos):
                builder.add_edge(new_id, other)
        return new_id

    unconnected = []
    for seat in plan.seats:
        nid = seat_node[seat.id]
        connected = connect_seat(plan, nid, range(len(builder.nodes)), builder,
                                 params.delta_s)
        while not connected and len(builder.exploration_idx) < params.K:
            new_id = grow()
            if new_id is None:
                continue
            connected = connect_seat(plan, nid, [new_id], builder, params.delta_s)
        if not connected:
            unconnected.append(seat.id)

    # spend any leftover budget densifying the roadmap: extra nodes and
    # edges shorten detours, and seats keep picking up nearby nodes
    while len(builder.exploration_idx) < params.K:
        new_id = grow()
        if new_id is None:
            continue
        for seat in plan.seats:
            nid = seat_node[seat.id]
            spos = builder.nodes[nid].pos
            npos = builder.nodes[new_id].pos
            if _euclid(spos, npos) <= params.delta_s and \
                    segment_free(plan, spos, npos):
                builder.add_edge(nid, new_id)

    # a later union can attach a previously reported island; re-check
    unconnected = [sid for sid in unconnected
                   if not builder.same_component(seat_node[sid], 0)]
    return Roadmap(builder.nodes, builder.edges, unconnected)


def all_pairs_seat_distances(roadmap):
    """Shortest-path distances between every seat pair over the full graph."""
    n = len(roadmap.nodes)
    if n == 0:
        raise ValueError("empty roadmap")
    seat_nodes = roadmap.seat_nodes()
    seat_ids = [s.seat_id for s in seat_nodes]
    seat_idx = np.asarray([s.id for s in seat_nodes], dtype=int)

    # coalesce parallel edges by minimum weight (csr would sum them)
    best = {}
    for u, v, w in roadmap.edges:
        key = (u, v) if u < v else (v, u)
        if key not in best or w < best[key]:
            best[key] = w
    rows, cols, vals = [], [], []
    for (u, v), w in best.items():
        rows += [u, v]
        cols += [v, u]
        vals += [w, w]
    graph = csr_matrix((vals, (rows, cols)), shape=(n, n))

    if n <= _DENSE_APSP_LIMIT:
        full = floyd_warshall(graph.toarray(), directed=False)
        sub = full[np.ix_(seat_idx, seat_idx)]
    else:
        rows_d = dijkstra(graph, directed=False, indices=seat_idx)
        sub = rows_d[:, seat_idx]

    sub = np.minimum(sub, sub.T)
    np.fill_diagonal(sub, 0.0)
    connected = bool(np.all(np.isfinite(sub)))
    return DistanceMatrix(seat_ids, sub, connected)


def distance_cache_key(plan_bytes, params):
    h = hashlib.sha256()
    h.update(plan_bytes)
    h.update(json.dumps({"K": params.K, "delta_c": params.delta_c,
                         "delta_s": params.delta_s, "seed": params.seed},
                        sort_keys=True).encode())
    return h.hexdigest()[:16]


def save_distances(matrix, path):
    """Cache format: one JSON header line, then row-major float64 bytes."""
    header = json.dumps({"count": len(matrix.seat_ids), "seat_ids": matrix.seat_ids,
                         "connected": matrix.connected}).encode()
    with open(path, "wb") as fh:
        fh.write(header + b"\n")
        fh.write(np.ascontiguousarray(matrix.dist, dtype=np.float64).tobytes())


def load_distances(path):
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        raw = fh.read()
    n = header["count"]
    dist = np.frombuffer(raw, dtype=np.float64).reshape(n, n).copy()
    return DistanceMatrix(header["seat_ids"], dist, header["connected"])
