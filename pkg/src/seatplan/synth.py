"""Synthetic floor plans, hierarchies, and random problem instances.

The real floor plans behind the published evaluation are proprietary,
so tests and demos run on deterministic synthetic stand-ins: a walled
toy with four separated areas, a medium office with corridors sized
like the small production instance, and random small instances for
oracle sweeps.
"""

import itertools
import json

import numpy as np

from seatplan.floorplan import DESK, OFFICE, Seat, load_floorplan
from seatplan.hierarchy import Hierarchy
from seatplan.model import SaProblem, Team, euclidean_distances
from seatplan.roadmap import DistanceMatrix


def _plan_doc(width, height, obstacles, seats):
    return {
        "width": width,
        "height": height,
        "obstacles": [[[x, y] for x, y in poly] for poly in obstacles],
        "seats": [{"id": s[0], "kind": s[1], "x": s[2], "y": s[3]} for s in seats],
    }


def _rect(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def toy_walled_plan():
    """42 desks in four areas separated by four wall rectangles.

    Areas communicate through a central opening and around the outer
    border, so walkable distances between areas far exceed the straight
    line through a wall.
    """
    walls = [
        _rect(48, 10, 52, 46),   # vertical, lower
        _rect(48, 54, 52, 90),   # vertical, upper
        _rect(10, 48, 46, 52),   # horizontal, left
        _rect(54, 48, 90, 52),   # horizontal, right
    ]
    seats = []
    quadrants = [
        ("q1", [12, 22, 32, 42], [12, 24, 36]),
        ("q2", [58, 68, 78, 88], [12, 24, 36]),
        ("q3", [12, 26, 40], [62, 74, 86]),
        ("q4", [60, 74, 88], [62, 74, 86]),
    ]
    for name, xs, ys in quadrants:
        for i, (x, y) in enumerate(itertools.product(xs, ys)):
            seats.append((f"{name}-{i:02d}", DESK, float(x), float(y)))
    doc = _plan_doc(100.0, 100.0, walls, seats)
    return load_floorplan(json.dumps(doc))


def toy_region_of(seat_id):
    """Wall-separated area a toy-plan seat belongs to."""
    return seat_id.split("-")[0]


def toy_teams():
    """Four teams; two are too large for any single area."""
    return [Team("amber", 14, 0), Team("blue", 13, 0),
            Team("coral", 8, 0), Team("dune", 5, 0)]


def medium_plan():
    """~170 desks and 26 offices in four rooms joined by corridors."""
    walls = [
        _rect(78, 0, 82, 150),
        _rect(158, 50, 162, 200),
        _rect(238, 0, 242, 150),
    ]
    seats = []
    n = 0
    zones = [(10, 70), (90, 150), (170, 230), (250, 310)]
    for zx0, zx1 in zones:
        for x in range(zx0, zx1 + 1, 15):
            for y in range(10, 141, 15):
                if n >= 170:
                    break
                seats.append((f"d{n:03d}", DESK, float(x), float(y)))
                n += 1
    k = 0
    for x in range(8, 313, 11):
        if 150 <= x <= 170:  # wall 2 reaches the top edge
            continue
        if k >= 26:
            break
        seats.append((f"o{k:02d}", OFFICE, float(x), 190.0))
        k += 1
    doc = _plan_doc(320.0, 200.0, walls, seats)
    return load_floorplan(json.dumps(doc))


def open_plan(n_desks, n_offices, width=100.0, height=100.0):
    """Obstacle-free grid plan."""
    seats = []
    cols = max(1, int(np.ceil(np.sqrt(n_desks + n_offices))))
    pts = []
    step_x = width / (cols + 1)
    rows = int(np.ceil((n_desks + n_offices) / cols))
    step_y = height / (rows + 1)
    for r in range(rows):
        for c in range(cols):
            pts.append(((c + 1) * step_x, (r + 1) * step_y))
    for i in range(n_desks):
        seats.append((f"d{i:03d}", DESK, pts[i][0], pts[i][1]))
    for j in range(n_offices):
        x, y = pts[n_desks + j]
        seats.append((f"o{j:03d}", OFFICE, x, y))
    return load_floorplan(json.dumps(_plan_doc(width, height, [], seats)))


def sealed_room_plan():
    """One seat locked inside a closed box; unreachable from outside."""
    seats = [("out-0", DESK, 10.0, 10.0), ("out-1", DESK, 30.0, 10.0),
             ("in-0", DESK, 70.0, 70.0)]
    # box around (70, 70) built from four touching wall rectangles
    walls = [
        _rect(60, 60, 80, 62),
        _rect(60, 78, 80, 80),
        _rect(60, 62, 62, 78),
        _rect(78, 62, 80, 78),
    ]
    return load_floorplan(json.dumps(_plan_doc(100.0, 100.0, walls, seats)))


def line_problem(positions, kinds, teams):
    """SA instance with seats on a line and D = |x_i - x_j|.

    ``positions`` maps seat id -> coordinate; ``kinds`` maps seat id ->
    desk/office.
    """
    ids = sorted(positions)
    seats = [Seat(i, kinds[i], (float(positions[i]), 0.0)) for i in ids]
    n = len(ids)
    dist = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            dist[a, b] = abs(positions[ids[a]] - positions[ids[b]])
    return SaProblem(seats, teams, DistanceMatrix(ids, dist, True))


def random_sa_instance(rng, max_seats=10, max_teams=3, office_share=0.3):
    """Small random instance with Euclidean distances, always feasible."""
    n = int(rng.integers(3, max_seats + 1))
    nt = int(rng.integers(1, max_teams + 1))
    seats = []
    for i in range(n):
        kind = OFFICE if rng.random() < office_share else DESK
        seats.append(Seat(f"s{i:02d}", kind,
                          (float(rng.uniform(0, 100)), float(rng.uniform(0, 100)))))
    n_desk = sum(1 for s in seats if s.kind == DESK)
    n_office = n - n_desk
    # every team gets one reserved seat first so no team ends up empty,
    # then leftover supply is sprinkled randomly
    demand = [[0, 0] for _ in range(nt)]
    avail = [n_desk, n_office]
    for ti in range(nt):
        k = 0 if avail[0] > 0 else 1
        if avail[1] > 0 and avail[0] > 0 and rng.random() < 0.3:
            k = 1
        demand[ti][k] += 1
        avail[k] -= 1
    for k in range(2):
        extra = int(rng.integers(0, avail[k] + 1)) if avail[k] else 0
        for _ in range(extra):
            demand[int(rng.integers(nt))][k] += 1
    teams = [Team(f"t{ti}", d, o) for ti, (d, o) in enumerate(demand)]
    return SaProblem(seats, teams, euclidean_distances(seats))


def random_team_config(rng, n_desks, n_offices, n_teams):
    """Flat team list with total demand <= supply, every team nonempty."""
    d_total = int(rng.integers(int(0.7 * n_desks), n_desks + 1))
    o_total = int(rng.integers(0, n_offices + 1))
    cuts = sorted(rng.choice(max(d_total, 1), size=n_teams - 1, replace=False)) \
        if n_teams > 1 and d_total >= n_teams else []
    desk_parts = np.diff([0] + [int(c) for c in cuts] + [d_total]) if d_total else \
        np.zeros(n_teams, dtype=int)
    office_parts = np.zeros(n_teams, dtype=int)
    for _ in range(o_total):
        office_parts[int(rng.integers(n_teams))] += 1
    teams = []
    for i in range(n_teams):
        d = int(desk_parts[i]) if len(desk_parts) == n_teams else 0
        o = int(office_parts[i])
        if d + o == 0:
            d = 1  # keep each team nonempty; supply slack absorbs this
        teams.append(Team(f"team{i:02d}", d, o))
    total_d = sum(t.desks_required for t in teams)
    if total_d > n_desks:  # trim overflow from the largest team
        biggest = max(teams, key=lambda t: t.desks_required)
        teams[teams.index(biggest)] = Team(
            biggest.id, biggest.desks_required - (total_d - n_desks),
            biggest.offices_required)
    return teams


def three_level_hierarchy():
    """3 levels, 2 branches, 8 leaves; 96 desks and 8 offices in total."""
    teams = {}
    parent = {}
    teams["org"] = Team("org", 96, 8)
    parent["org"] = None
    spec = {
        "org/a": ["a1", "a2", "a3", "a4"],
        "org/b": ["b1", "b2", "b3", "b4"],
    }
    leaf_desks = {"a1": 16, "a2": 12, "a3": 10, "a4": 10,
                  "b1": 14, "b2": 12, "b3": 12, "b4": 10}
    leaf_offices = {"a1": 2, "a2": 1, "a3": 1, "a4": 0,
                    "b1": 2, "b2": 1, "b3": 1, "b4": 0}
    for branch, leaves in spec.items():
        bid = branch.split("/")[1]
        teams[bid] = Team(bid, sum(leaf_desks[l] for l in leaves),
                          sum(leaf_offices[l] for l in leaves))
        parent[bid] = "org"
        for l in leaves:
            teams[l] = Team(l, leaf_desks[l], leaf_offices[l])
            parent[l] = bid
    return Hierarchy(teams, parent)


def org_chart_hierarchy():
    """Two-level company chart: three departments, six leaf teams,
    103 desks and 6 offices in total (3 desks stay vacant on the
    medium plan)."""
    leaf = {
        "eu-sales": (18, 1), "us-sales": (22, 1), "sales-eng": (12, 1),
        "rnd-eng": (25, 1), "ads": (14, 1), "digital": (12, 1),
    }
    branches = {
        "sales": ["eu-sales", "us-sales", "sales-eng"],
        "engineering": ["rnd-eng"],
        "marketing": ["ads", "digital"],
    }
    teams = {}
    parent = {}
    for b, leaves in branches.items():
        teams[b] = Team(b, sum(leaf[l][0] for l in leaves),
                        sum(leaf[l][1] for l in leaves))
        parent[b] = None
        for l in leaves:
            teams[l] = Team(l, *leaf[l])
            parent[l] = b
    return Hierarchy(teams, parent)


def hierarchy_to_doc(h):
    """Serialize a hierarchy to its JSON document form (leaf requirements
    given, branch requirements derived)."""
    records = []
    leaves = set(h.leaves())
    for t in sorted(h.teams):
        rec = {"id": t, "parent": h.parent[t]}
        if t in leaves:
            rec["desks"] = h.teams[t].desks_required
            rec["offices"] = h.teams[t].offices_required
        records.append(rec)
    return records
