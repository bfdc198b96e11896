"""Core seat-allocation problem types and pure evaluation helpers.

An allocation is a plain dict mapping seat id -> team id (seats may be
left out when supply exceeds demand). A central-seat map is a dict
mapping team id -> seat id. All tie-breaks are lexicographic on ids so
every operation is deterministic.
"""

from dataclasses import dataclass

import numpy as np

from seatplan.floorplan import DESK, OFFICE, Seat

RANDOM_INIT = "random"
KMEANSPP_INIT = "kmeans++"


class InfeasibleProblemError(ValueError):
    """Demand exceeds supply or the instance is otherwise unsolvable."""


@dataclass(frozen=True)
class Team:
    id: str
    desks_required: int
    offices_required: int

    def __post_init__(self):
        if self.desks_required < 0 or self.offices_required < 0:
            raise ValueError(f"team {self.id}: negative requirement")
        if self.desks_required + self.offices_required < 1:
            raise ValueError(f"team {self.id}: requires no seats")


@dataclass
class SaProblem:
    seats: list  # of Seat
    teams: list  # of Team
    distances: "DistanceMatrix"

    def __post_init__(self):
        ids = {s.id for s in self.seats}
        if ids != set(self.distances.seat_ids):
            raise ValueError("distance matrix does not cover exactly the seat set")
        self.teams = sorted(self.teams, key=lambda t: t.id)

    @property
    def desk_ids(self):
        return sorted(s.id for s in self.seats if s.kind == DESK)

    @property
    def office_ids(self):
        return sorted(s.id for s in self.seats if s.kind == OFFICE)

    def kind_of(self, seat_id):
        for s in self.seats:
            if s.id == seat_id:
                return s.kind
        raise KeyError(seat_id)

    def check_supply(self):
        need_d = sum(t.desks_required for t in self.teams)
        need_o = sum(t.offices_required for t in self.teams)
        if need_d > len(self.desk_ids):
            raise InfeasibleProblemError(
                f"desk demand {need_d} exceeds supply {len(self.desk_ids)}")
        if need_o > len(self.office_ids):
            raise InfeasibleProblemError(
                f"office demand {need_o} exceeds supply {len(self.office_ids)}")


@dataclass(frozen=True)
class SolverParams:
    max_iterations: int = 100
    time_limit: float = 600.0
    seed: int = 0
    s_n: int = 5
    init: str = KMEANSPP_INIT
    regret: str = "classic"  # or "paper-literal"
    # deterministic cap on branch-and-bound leaf evaluations; None = unbounded
    max_nodes: int = None

    def __post_init__(self):
        if self.max_iterations < 1 or self.s_n < 1 or self.time_limit <= 0:
            raise ValueError("require max_iterations >= 1, s_n >= 1, time_limit > 0")
        if self.init not in (RANDOM_INIT, KMEANSPP_INIT):
            raise ValueError(f"unknown init method: {self.init}")
        if self.regret not in ("classic", "paper-literal"):
            raise ValueError(f"unknown regret mode: {self.regret}")


def objective(problem, alloc, centrals):
    """Total distance from every assigned seat to its team's central seat."""
    total = 0.0
    for seat_id, team_id in alloc.items():
        if team_id not in centrals:
            raise ValueError(f"team {team_id} has seats but no central seat")
        total += problem.distances.d(seat_id, centrals[team_id])
    return total


def best_central_seat(problem, team_id, alloc):
    """Assigned seat of the team with the smallest total distance to the rest.

    Ties break toward the smallest seat id.
    """
    members = sorted(s for s, t in alloc.items() if t == team_id)
    if not members:
        raise ValueError(f"team {team_id} has no assigned seats")
    D = problem.distances
    idx = [D.index(s) for s in members]
    sub = D.dist[np.ix_(idx, idx)]
    totals = sub.sum(axis=1)
    return members[int(np.argmin(totals))]  # argmin returns first (smallest id) tie


def init_centrals(problem, method, seed):
    """Pick one distinct central seat per team.

    Random draws uniformly without replacement. k-means++ picks the
    first central uniformly and each next one with probability
    proportional to the squared roadmap distance to the nearest central
    chosen so far.
    """
    teams = sorted(problem.teams, key=lambda t: t.id)
    seat_ids = sorted(s.id for s in problem.seats)
    if len(teams) > len(seat_ids):
        raise InfeasibleProblemError("more teams than seats")
    rng = np.random.default_rng(seed)

    if method == RANDOM_INIT:
        picks = rng.choice(len(seat_ids), size=len(teams), replace=False)
        chosen = [seat_ids[int(i)] for i in picks]
    elif method == KMEANSPP_INIT:
        D = problem.distances
        idx = np.asarray([D.index(s) for s in seat_ids])
        chosen_idx = [int(rng.integers(len(seat_ids)))]
        while len(chosen_idx) < len(teams):
            sub = D.dist[np.ix_(idx[chosen_idx], idx)]
            w = np.min(sub, axis=0) ** 2
            w[chosen_idx] = 0.0
            w[~np.isfinite(w)] = 0.0
            if w.sum() <= 0.0:
                remaining = [i for i in range(len(seat_ids)) if i not in chosen_idx]
                chosen_idx.append(remaining[int(rng.integers(len(remaining)))])
            else:
                chosen_idx.append(int(rng.choice(len(seat_ids), p=w / w.sum())))
        chosen = [seat_ids[i] for i in chosen_idx]
    else:
        raise ValueError(f"unknown init method: {method}")

    return {t.id: chosen[i] for i, t in enumerate(teams)}


def validate(problem, alloc):
    """List every constraint violation of an allocation; empty means feasible.

    ``alloc`` is a dict seat id -> team id, or an iterable of
    (seat id, team id) pairs (the pair form can carry duplicate seats,
    e.g. from a corrupted input document).
    """
    violations = []
    team_by_id = {t.id: t for t in problem.teams}
    kind = {s.id: s.kind for s in problem.seats}

    pairs = list(alloc.items()) if isinstance(alloc, dict) else list(alloc)
    seen = set()
    for seat_id, _ in pairs:
        if seat_id in seen:
            violations.append(f"seat {seat_id} assigned to more than one team")
        seen.add(seat_id)

    counts = {t.id: {DESK: 0, OFFICE: 0} for t in problem.teams}
    for seat_id, team_id in pairs:
        if seat_id not in kind:
            violations.append(f"unknown seat {seat_id} in allocation")
            continue
        if team_id not in team_by_id:
            violations.append(f"seat {seat_id} assigned to unknown team {team_id}")
            continue
        counts[team_id][kind[seat_id]] += 1

    for t in problem.teams:
        got_d = counts[t.id][DESK]
        got_o = counts[t.id][OFFICE]
        if got_d != t.desks_required:
            violations.append(
                f"team {t.id}: desks assigned {got_d} != required {t.desks_required}")
        if got_o != t.offices_required:
            violations.append(
                f"team {t.id}: offices assigned {got_o} != required {t.offices_required}")
    return violations


def euclidean_distances(seats):
    """DistanceMatrix of straight-line distances, for baseline comparisons."""
    from seatplan.roadmap import DistanceMatrix

    ordered = sorted(seats, key=lambda s: s.id)
    pos = np.asarray([s.pos for s in ordered], dtype=float)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    return DistanceMatrix([s.id for s in ordered], dist, True)
