"""Roadmap construction, shortest-path distances, and the cache format."""

import math

import numpy as np
import pytest

from seatplan import synth
from seatplan.floorplan import segment_free
from seatplan.roadmap import (
    DistanceMatrix,
    RoadmapParams,
    all_pairs_seat_distances,
    cast,
    distance_cache_key,
    generate_prm,
    load_distances,
    save_distances,
)
from conftest import TOY_ROADMAP_PARAMS


def test_params_validation():
    with pytest.raises(ValueError):
        RoadmapParams(K=-1, delta_c=1.0, delta_s=1.0)
    with pytest.raises(ValueError):
        RoadmapParams(K=10, delta_c=0.0, delta_s=1.0)
    with pytest.raises(ValueError):
        RoadmapParams(K=10, delta_c=1.0, delta_s=-1.0)


def test_cast_steps_at_most_delta_c():
    plan = synth.open_plan(1, 0)
    p = cast(plan, (10.0, 10.0), (10.0, 90.0), 5.0)
    assert p == pytest.approx((10.0, 15.0))
    # closer than delta_c: lands on the target
    p = cast(plan, (10.0, 10.0), (10.0, 12.0), 5.0)
    assert p == pytest.approx((10.0, 12.0))


def test_cast_blocked_by_wall(toy_plan):
    # straight through the lower vertical wall (x in [48, 52])
    assert cast(toy_plan, (45.0, 30.0), (55.0, 30.0), 10.0) is None
    # short step away from the wall is fine
    assert cast(toy_plan, (45.0, 30.0), (30.0, 30.0), 5.0) is not None


def test_generate_prm_connects_open_plan():
    plan = synth.open_plan(9, 3)
    roadmap = generate_prm(plan, RoadmapParams(K=200, delta_c=10.0, delta_s=25.0, seed=0))
    assert roadmap.unconnected_seats == []
    matrix = all_pairs_seat_distances(roadmap)
    assert matrix.connected


def test_generate_prm_determinism(toy_plan):
    a = generate_prm(toy_plan, TOY_ROADMAP_PARAMS)
    b = generate_prm(toy_plan, TOY_ROADMAP_PARAMS)
    assert [n.pos for n in a.nodes] == [n.pos for n in b.nodes]
    assert a.edges == b.edges


def test_generate_prm_budget_monotone(toy_plan):
    """A run with a larger node budget extends the smaller run exactly:
    the RNG stream is consumed identically up to the smaller budget."""
    small = generate_prm(toy_plan, RoadmapParams(K=40, delta_c=6.0, delta_s=9.0, seed=1))
    large = generate_prm(toy_plan, RoadmapParams(K=2000, delta_c=6.0, delta_s=9.0, seed=1))
    n = len(small.nodes)
    assert [x.pos for x in large.nodes[:n]] == [x.pos for x in small.nodes]
    assert set(small.edges) <= set(large.edges)


def test_all_edges_collision_free(toy_plan, toy_roadmap):
    for u, v, w in toy_roadmap.edges:
        a = toy_roadmap.nodes[u].pos
        b = toy_roadmap.nodes[v].pos
        assert segment_free(toy_plan, a, b)
        assert w == pytest.approx(math.dist(a, b))


def test_seat_nodes_cover_all_seats(toy_plan, toy_roadmap):
    assert {n.seat_id for n in toy_roadmap.seat_nodes()} == \
        {s.id for s in toy_plan.seats}


def test_sealed_seat_reported_unconnected():
    plan = synth.sealed_room_plan()
    roadmap = generate_prm(plan, RoadmapParams(K=600, delta_c=8.0, delta_s=12.0, seed=5))
    assert roadmap.unconnected_seats == ["in-0"]
    matrix = all_pairs_seat_distances(roadmap)
    assert not matrix.connected
    assert math.isinf(matrix.d("out-0", "in-0"))
    assert math.isfinite(matrix.d("out-0", "out-1"))


def test_distances_symmetric_zero_diagonal(toy_distances):
    assert np.array_equal(toy_distances.dist, toy_distances.dist.T)
    assert np.all(np.diag(toy_distances.dist) == 0.0)


def test_distances_lower_bounded_by_euclidean(toy_plan, toy_distances):
    pos = {s.id: s.pos for s in toy_plan.seats}
    for a in toy_distances.seat_ids:
        for b in toy_distances.seat_ids:
            assert toy_distances.d(a, b) >= math.dist(pos[a], pos[b]) - 1e-6


def test_walled_pairs_cost_more_than_straight_line(toy_plan, toy_distances):
    # q1-10 and q2-01 face each other across the lower vertical wall: the
    # walk detours through the central opening or around the border
    d = toy_distances.d("q1-10", "q2-01")  # (42, 24) vs (58, 24)
    assert d > 2.0 * math.dist((42, 24), (58, 24))


def test_apsp_matches_single_source_dijkstra(toy_roadmap, toy_distances):
    """Independent route: per-seat Bellman-style relaxation in pure
    Python over the same edge list."""
    n = len(toy_roadmap.nodes)
    adj = [[] for _ in range(n)]
    for u, v, w in toy_roadmap.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    import heapq

    seat_nodes = toy_roadmap.seat_nodes()
    for src in seat_nodes[::7]:  # a sample of sources keeps this quick
        dist = [math.inf] * n
        dist[src.id] = 0.0
        heap = [(0.0, src.id)]
        while heap:
            d0, u = heapq.heappop(heap)
            if d0 > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d0 + w
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for dst in seat_nodes:
            assert toy_distances.d(src.seat_id, dst.seat_id) == \
                pytest.approx(dist[dst.id], abs=1e-9)


def test_dense_and_sparse_apsp_agree(toy_roadmap):
    import seatplan.roadmap as rm

    dense = all_pairs_seat_distances(toy_roadmap)
    old = rm._DENSE_APSP_LIMIT
    rm._DENSE_APSP_LIMIT = 0  # force the Dijkstra path
    try:
        sparse = all_pairs_seat_distances(toy_roadmap)
    finally:
        rm._DENSE_APSP_LIMIT = old
    assert np.allclose(dense.dist, sparse.dist, atol=1e-9)


def test_cache_roundtrip(tmp_path, toy_distances):
    path = tmp_path / "dist.bin"
    save_distances(toy_distances, path)
    loaded = load_distances(path)
    assert loaded.seat_ids == toy_distances.seat_ids
    assert loaded.connected == toy_distances.connected
    assert np.array_equal(loaded.dist, toy_distances.dist)
    assert loaded.d("q1-00", "q4-08") == toy_distances.d("q1-00", "q4-08")


def test_cache_key_sensitivity():
    params = RoadmapParams(K=100, delta_c=5.0, delta_s=8.0, seed=0)
    k1 = distance_cache_key(b"plan-a", params)
    k2 = distance_cache_key(b"plan-b", params)
    k3 = distance_cache_key(b"plan-a", RoadmapParams(K=100, delta_c=5.0,
                                                     delta_s=8.0, seed=1))
    assert k1 != k2 and k1 != k3
    assert k1 == distance_cache_key(b"plan-a", params)


def test_distance_matrix_helpers():
    m = DistanceMatrix(["a", "b"], np.array([[0.0, 2.0], [2.0, 0.0]]), True)
    assert m.d("a", "b") == 2.0
    assert m.index("b") == 1
