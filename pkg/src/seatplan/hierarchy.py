"""Organizational hierarchy and its depth-first decomposition.

The hierarchy document is a JSON array of ``{id, parent, desks,
offices}`` records. Leaf requirements must be given; branch
requirements are either given (then checked against the sum over
children) or derived by summation when omitted.
"""

import json
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from seatplan.floorplan import DESK, OFFICE
from seatplan.model import InfeasibleProblemError, SaProblem, Team
from seatplan.roadmap import DistanceMatrix
from seatplan.solvers import solve
from scipy.optimize import linear_sum_assignment


class HierarchyError(ValueError):
    """Malformed hierarchy document or broken forest invariants."""


@dataclass
class Hierarchy:
    teams: dict  # team id -> Team
    parent: dict  # team id -> parent id or None
    levels: list = field(default=None)  # levels[l] = sorted team ids at level l

    def __post_init__(self):
        if self.levels is None:
            self.levels = self._compute_levels()

    def _compute_levels(self):
        depth = {}

        def walk(t, seen):
            if t in depth:
                return depth[t]
            if t in seen:
                raise HierarchyError(f"cycle through team {t}")
            seen.add(t)
            p = self.parent.get(t)
            d = 0 if p is None else walk(p, seen) + 1
            depth[t] = d
            return d

        for t in self.teams:
            walk(t, set())
        height = max(depth.values()) + 1 if depth else 0
        levels = [[] for _ in range(height)]
        for t, d in depth.items():
            levels[d].append(t)
        return [sorted(l) for l in levels]

    @property
    def H(self):
        return len(self.levels)

    def children(self, team_id):
        return sorted(t for t, p in self.parent.items() if p == team_id)

    def roots(self):
        return sorted(t for t, p in self.parent.items() if p is None)

    def leaves(self):
        has_child = set(p for p in self.parent.values() if p is not None)
        return sorted(t for t in self.teams if t not in has_child)

    def level_of(self, team_id):
        for l, ids in enumerate(self.levels):
            if team_id in ids:
                return l
        raise KeyError(team_id)

    def ancestor_at_level(self, team_id, level):
        t = team_id
        while t is not None and self.level_of(t) > level:
            t = self.parent[t]
        return t if t is not None and self.level_of(t) == level else None


@dataclass
class HierarchicalAllocation:
    per_level: list  # per_level[l]: dict seat id -> team id at level l
    per_team_central: dict  # team id -> seat id


def load_hierarchy(source):
    """Parse the hierarchy document, deriving omitted branch requirements."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        records = json.loads(source)
    except json.JSONDecodeError as exc:
        raise HierarchyError(f"malformed hierarchy document: {exc}") from exc
    if not isinstance(records, list):
        raise HierarchyError("hierarchy document must be an array")

    parent = {}
    raw = {}
    for rec in records:
        tid = str(rec["id"])
        if tid in raw:
            raise HierarchyError(f"duplicate team id: {tid}")
        raw[tid] = rec
        p = rec.get("parent")
        parent[tid] = str(p) if p is not None else None
    for tid, p in parent.items():
        if p is not None and p not in raw:
            raise HierarchyError(f"team {tid}: unknown parent {p}")

    children = {t: [] for t in raw}
    for t, p in parent.items():
        if p is not None:
            children[p].append(t)

    def requirements(tid, seen=()):
        if tid in seen:
            raise HierarchyError(f"cycle through team {tid}")
        rec = raw[tid]
        kids = children[tid]
        if not kids:
            if "desks" not in rec and "offices" not in rec:
                raise HierarchyError(f"leaf team {tid}: requirements missing")
            return int(rec.get("desks", 0)), int(rec.get("offices", 0))
        sums = [requirements(k, seen + (tid,)) for k in kids]
        d = sum(x[0] for x in sums)
        o = sum(x[1] for x in sums)
        if "desks" in rec and int(rec["desks"]) != d:
            raise HierarchyError(
                f"team {tid}: desks {rec['desks']} != sum of children {d}")
        if "offices" in rec and int(rec["offices"]) != o:
            raise HierarchyError(
                f"team {tid}: offices {rec['offices']} != sum of children {o}")
        return d, o

    teams = {}
    for tid in raw:
        d, o = requirements(tid)
        teams[tid] = Team(tid, d, o)
    return Hierarchy(teams, parent)


def validate_hierarchy(h):
    """Forest structure and requirement-summation violations, empty if none."""
    violations = []
    try:
        h._compute_levels()
    except HierarchyError as exc:
        violations.append(str(exc))
        return violations
    for t in sorted(h.teams):
        kids = h.children(t)
        if not kids:
            continue
        d = sum(h.teams[k].desks_required for k in kids)
        o = sum(h.teams[k].offices_required for k in kids)
        team = h.teams[t]
        if team.desks_required != d:
            violations.append(
                f"team {t}: desks {team.desks_required} != sum of children {d}"
                f" (delta {team.desks_required - d})")
        if team.offices_required != o:
            violations.append(
                f"team {t}: offices {team.offices_required} != sum of children {o}"
                f" (delta {team.offices_required - o})")
    return violations


def _sub_seed(base_seed, tag):
    return (int(base_seed) * 2654435761 + zlib.crc32(tag.encode())) % (2 ** 32)


def _sub_distances(distances, seat_ids):
    idx = [distances.index(s) for s in seat_ids]
    return DistanceMatrix(list(seat_ids), distances.dist[np.ix_(idx, idx)],
                          bool(np.all(np.isfinite(distances.dist[np.ix_(idx, idx)]))))


def df_hsa(seats, distances, h, method, params, delayed=False):
    """Allocate the hierarchy top-down, each team's children restricted to
    the seats of their parent.

    With ``delayed=True`` every sub-problem uses desk requirements only
    and offices are left to :func:`delayed_office_allocate`. Returns
    (HierarchicalAllocation, sub_reports) where sub_reports carries one
    entry per solved sub-problem.
    """
    bad = validate_hierarchy(h)
    if bad:
        raise HierarchyError("; ".join(bad))
    per_level = [dict() for _ in range(h.H)]
    per_team_central = {}
    sub_reports = []
    seat_by_id = {s.id: s for s in seats}

    def make_teams(team_ids):
        out = []
        for t in team_ids:
            team = h.teams[t]
            if delayed:
                if team.desks_required > 0:
                    out.append(Team(t, team.desks_required, 0))
                # desk-less teams are skipped here; their offices arrive in
                # the delayed pass and their central falls back to an ancestor
            else:
                out.append(team)
        return out

    def solve_level(seat_ids, team_ids, level, path):
        teams = make_teams(team_ids)
        if teams:
            sub_seats = [seat_by_id[s] for s in seat_ids]
            problem = SaProblem(sub_seats, teams, _sub_distances(distances, sorted(seat_ids)))
            sub_params = params.__class__(
                max_iterations=params.max_iterations, time_limit=params.time_limit,
                seed=_sub_seed(params.seed, path), s_n=params.s_n,
                init=params.init, regret=params.regret, max_nodes=params.max_nodes)
            t0 = time.monotonic()
            try:
                result = solve(problem, method, sub_params)
            except InfeasibleProblemError as exc:
                raise InfeasibleProblemError(f"sub-problem at {path or '<roots>'}: {exc}")
            sub_reports.append({"path": path, "level": level,
                                "objective": result.objective,
                                "optimal": result.optimal,
                                "iterations": result.iterations,
                                "elapsed": time.monotonic() - t0})
            per_level[level].update(result.allocation)
            per_team_central.update(result.centrals)
        for t in sorted(team_ids):
            kids = h.children(t)
            if not kids:
                continue
            child_seats = sorted(s for s, tt in per_level[level].items() if tt == t)
            solve_level(child_seats, kids, level + 1, f"{path}/{t}" if path else t)

    solve_level(sorted(seat_by_id), h.roots(), 0, "")
    # desk-less teams inherit the nearest ancestor central (delayed mode)
    for t in sorted(h.teams):
        if t not in per_team_central:
            anc = h.parent.get(t)
            while anc is not None and anc not in per_team_central:
                anc = h.parent.get(anc)
            if anc is not None:
                per_team_central[t] = per_team_central[anc]
    return HierarchicalAllocation(per_level, per_team_central), sub_reports


def delayed_office_allocate(seats, distances, h, desk_result):
    """Assign all offices to leaf teams in one exact transportation pass,
    minimizing distance to each leaf's recorded central seat, then
    propagate ownership to every ancestor level."""
    office_ids = sorted(s.id for s in seats if s.kind == OFFICE)
    leaves = h.leaves()
    slots = []
    for t in leaves:
        need = h.teams[t].offices_required
        if need > 0 and t not in desk_result.per_team_central:
            raise HierarchyError(f"leaf team {t}: no central seat available")
        slots.extend([t] * need)
    if len(slots) > len(office_ids):
        raise InfeasibleProblemError(
            f"office demand {len(slots)} exceeds supply {len(office_ids)}")

    per_level = [dict(m) for m in desk_result.per_level]
    if slots:
        rows = np.asarray([distances.index(s) for s in office_ids])
        cols = np.asarray([distances.index(desk_result.per_team_central[t])
                           for t in slots])
        cost = distances.dist[np.ix_(rows, cols)]
        ri, ci = linear_sum_assignment(cost)
        for r, c in zip(ri, ci):
            office = office_ids[int(r)]
            leaf = slots[int(c)]
            leaf_level = h.level_of(leaf)
            for level in range(leaf_level + 1):
                owner = h.ancestor_at_level(leaf, level)
                if owner is not None:
                    per_level[level][office] = owner
    return HierarchicalAllocation(per_level, dict(desk_result.per_team_central))
