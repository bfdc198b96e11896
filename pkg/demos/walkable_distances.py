"""Build a roadmap over the walled toy floor and compare walkable
distances against straight lines.

Run:  python3 demos/walkable_distances.py
Writes demos/out/toy-roadmap.svg.
"""

import math
from pathlib import Path

from seatplan import synth
from seatplan.reporting import render_svg
from seatplan.roadmap import RoadmapParams, all_pairs_seat_distances, generate_prm

OUT = Path(__file__).resolve().parent / "out"


def main():
    plan = synth.toy_walled_plan()
    params = RoadmapParams(K=2000, delta_c=6.0, delta_s=9.0, seed=1)
    roadmap = generate_prm(plan, params)
    matrix = all_pairs_seat_distances(roadmap)
    print(f"{len(plan.seats)} seats, {roadmap.exploration_count} sampled nodes, "
          f"{len(roadmap.edges)} edges, connected: {matrix.connected}")

    pos = {s.id: s.pos for s in plan.seats}
    pairs = [("q1-10", "q2-01"), ("q1-00", "q4-08"), ("q1-00", "q1-11")]
    print(f"{'pair':<18}{'straight':>10}{'walk':>10}{'detour':>9}")
    for a, b in pairs:
        line = math.dist(pos[a], pos[b])
        walk = matrix.d(a, b)
        print(f"{a + ' - ' + b:<18}{line:>10.1f}{walk:>10.1f}{walk / line:>8.2f}x")

    OUT.mkdir(exist_ok=True)
    (OUT / "toy-roadmap.svg").write_text(render_svg(plan, roadmap=roadmap) + "\n")
    print(f"wrote {OUT / 'toy-roadmap.svg'}")


if __name__ == "__main__":
    main()
