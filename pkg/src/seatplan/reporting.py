"""Evaluation metrics and SVG rendering of allocations and roadmaps.

Reported distances are in the floor plan's native length units; values
are never compared across plans. Per-level means are averaged
unweighted across levels by default (a seat-weighted variant is exposed
behind a flag for sensitivity checks).
"""

import math
from dataclasses import dataclass, asdict

from seatplan.floorplan import OFFICE

PALETTE = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
    "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324",
    "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1", "#000075",
]
NEUTRAL = "#c8c8c8"
OBSTACLE_FILL = "#9e9e9e"


@dataclass
class LevelMetrics:
    level: int
    mean_central_seat_distance: float  # None when no seats allocated
    mean_office_distance: float  # None when no offices at this level
    max_central_seat_distance: float
    seats_allocated: int


@dataclass
class RunReport:
    per_level: list  # of LevelMetrics
    averaged: LevelMetrics
    method: str
    params: dict
    seed: int
    elapsed_seconds: dict = None  # {"total": ..., "sub_problems": [...]}

    def to_doc(self, include_timings=True):
        doc = {
            "method": self.method,
            "params": self.params,
            "seed": self.seed,
            "per_level": [asdict(m) for m in self.per_level],
            "averaged": asdict(self.averaged),
        }
        if include_timings and self.elapsed_seconds is not None:
            doc["elapsed_seconds"] = self.elapsed_seconds
        return doc


def _mean(values):
    vals = [v for v in values if v is not None]
    return sum(vals) / len(vals) if vals else None


def compute_metrics(seats, distances, h, result, method="", params=None, seed=0,
                    weighted=False, elapsed=None):
    """Per-level central-seat and office distance statistics.

    For each level l and each seat s owned by team t in that level's
    map, the central-seat distance D(s, central(t)) is accumulated;
    offices additionally feed the office statistic.
    """
    kind = {s.id: s.kind for s in seats}
    per_level = []
    for l, mapping in enumerate(result.per_level):
        all_d = []
        office_d = []
        for seat_id in sorted(mapping):
            team_id = mapping[seat_id]
            central = result.per_team_central.get(team_id)
            if central is None:
                raise ValueError(f"team {team_id} owns seats but has no central seat")
            d = distances.d(seat_id, central)
            all_d.append(d)
            if kind[seat_id] == OFFICE:
                office_d.append(d)
        per_level.append(LevelMetrics(
            level=l,
            mean_central_seat_distance=_mean(all_d) if all_d else None,
            mean_office_distance=_mean(office_d) if office_d else None,
            max_central_seat_distance=max(all_d) if all_d else None,
            seats_allocated=len(all_d),
        ))

    if weighted:
        total = sum(m.seats_allocated for m in per_level)
        mean_c = (sum(m.mean_central_seat_distance * m.seats_allocated
                      for m in per_level if m.mean_central_seat_distance is not None)
                  / total) if total else None
    else:
        mean_c = _mean([m.mean_central_seat_distance for m in per_level])
    averaged = LevelMetrics(
        level=-1,
        mean_central_seat_distance=mean_c,
        mean_office_distance=_mean([m.mean_office_distance for m in per_level]),
        max_central_seat_distance=_mean([m.max_central_seat_distance for m in per_level]),
        seats_allocated=sum(m.seats_allocated for m in per_level),
    )
    return RunReport(per_level, averaged, method, params or {}, seed, elapsed)


def _fmt(x):
    return f"{x:.6g}"


def team_palette(team_ids):
    ordered = sorted(team_ids)
    return {t: PALETTE[i % len(PALETTE)] for i, t in enumerate(ordered)}


def render_svg(plan, allocation=None, centrals=None, roadmap=None, level=None,
               team_names=None, scale=6.0):
    """Deterministic SVG of the floor plan.

    ``allocation`` is a seat id -> team id map (one level); unallocated
    seats draw in a neutral color. Desks are circles, offices squares,
    central seats get a ring. ``roadmap`` adds a node/edge overlay.
    """
    allocation = allocation or {}
    centrals = centrals or {}
    palette = team_palette(set(allocation.values()))
    legend_w = 130 if palette else 0
    w = plan.width * scale + legend_w
    h = plan.height * scale

    def sx(x):
        return _fmt(x * scale)

    def sy(y):
        return _fmt((plan.height - y) * scale)  # y up

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(plan.width * scale)}" '
        f'height="{_fmt(h)}" fill="#ffffff" stroke="#000000"/>',
    ]
    for poly in plan.obstacles:
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in poly.vertices)
        parts.append(f'<polygon points="{pts}" fill="{OBSTACLE_FILL}" stroke="none"/>')

    if roadmap is not None:
        for u, v, _w in roadmap.edges:
            a = roadmap.nodes[u].pos
            b = roadmap.nodes[v].pos
            parts.append(
                f'<line x1="{sx(a[0])}" y1="{sy(a[1])}" x2="{sx(b[0])}" '
                f'y2="{sy(b[1])}" stroke="#7fb0d8" stroke-width="0.6"/>')
        for node in roadmap.nodes:
            if node.origin != "seat":
                parts.append(
                    f'<circle cx="{sx(node.pos[0])}" cy="{sy(node.pos[1])}" '
                    f'r="1.2" fill="#5588bb"/>')

    central_seats = set(centrals.values())
    r = max(2.0, scale * 0.55)
    for seat in sorted(plan.seats, key=lambda s: s.id):
        color = palette.get(allocation.get(seat.id), NEUTRAL)
        cx, cy = sx(seat.pos[0]), sy(seat.pos[1])
        if seat.kind == OFFICE:
            parts.append(
                f'<rect x="{_fmt(float(cx) - r)}" y="{_fmt(float(cy) - r)}" '
                f'width="{_fmt(2 * r)}" height="{_fmt(2 * r)}" fill="{color}" '
                f'stroke="#333333" stroke-width="0.5"/>')
        else:
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(r)}" fill="{color}" '
                f'stroke="#333333" stroke-width="0.5"/>')
        if seat.id in central_seats:
            parts.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(r * 1.8)}" fill="none" '
                f'stroke="#000000" stroke-width="1"/>')

    if palette:
        x0 = plan.width * scale + 10
        y0 = 20.0
        if level is not None:
            parts.append(
                f'<text x="{_fmt(x0)}" y="{_fmt(y0 - 8)}" font-size="11" '
                f'font-family="sans-serif">level {level}</text>')
        for i, team in enumerate(sorted(palette)):
            y = y0 + 16 * i
            label = (team_names or {}).get(team, team)
            parts.append(
                f'<rect x="{_fmt(x0)}" y="{_fmt(y)}" width="12" height="12" '
                f'fill="{palette[team]}"/>')
            parts.append(
                f'<text x="{_fmt(x0 + 16)}" y="{_fmt(y + 10)}" font-size="11" '
                f'font-family="sans-serif">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def standard_error(values):
    n = len(values)
    if n <= 1:
        return 0.0
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return math.sqrt(var / n)


def aggregate_docs(report_docs, timing_docs):
    """Mean and standard error over per-seed (report, timing) documents
    for one method."""
    rows = {}
    for key in ("mean_central_seat_distance", "mean_office_distance"):
        vals = [doc["averaged"][key] for doc in report_docs
                if doc["averaged"][key] is not None]
        rows[key] = {"mean": sum(vals) / len(vals) if vals else None,
                     "stderr": standard_error(vals) if vals else None,
                     "n": len(vals)}
    times = [doc["total"] for doc in timing_docs]
    rows["exec_time_seconds"] = {"mean": sum(times) / len(times) if times else None,
                                 "stderr": standard_error(times) if times else None,
                                 "n": len(times)}
    return rows


def format_bench_table(per_method):
    """Plain-text table: one block per method, rows for central-seat
    distance, office distance, and execution time (mean +/- stderr)."""
    lines = []
    labels = [("mean_central_seat_distance", "Central Seat Distance"),
              ("mean_office_distance", "Office Distance"),
              ("exec_time_seconds", "Exec. Time (s)")]
    for method in sorted(per_method):
        rows = per_method[method]
        lines.append(method)
        for key, label in labels:
            cell = rows[key]
            if cell["mean"] is None:
                lines.append(f"  {label:<24} -")
            else:
                lines.append(f"  {label:<24} {cell['mean']:.4f} +/- {cell['stderr']:.4f}")
    return "\n".join(lines) + "\n"
