import random

import pytest

from streamcolor.errors import BoundViolation
from streamcolor.meter import SpaceMeter
from streamcolor.palette import ColorAllocator
from streamcolor.reductions import (
    TwoSidedSplit,
    VertexBipartization,
    level_degree_bound,
    plan_levels,
    stop_threshold,
)


def checker(assignments):
    seen = set()
    for a in assignments:
        for end in (a.u, a.v):
            key = (end, a.color)
            assert key not in seen, f"conflict at {key}"
            seen.add(key)


def test_level_bounds_shrink_with_slack():
    assert level_degree_bound(128, 0) == 192
    assert level_degree_bound(128, 1) == 96
    assert level_degree_bound(128, 2) == 48
    assert level_degree_bound(5, 0) == 8


def test_plan_levels_respects_the_stop_rule():
    assert stop_threshold(1024) == 100.0
    assert plan_levels(1024, 128) == [192]
    assert plan_levels(256, 128) == [192, 96]
    assert plan_levels(1024, 2) == []  # everything lands in the base store
    assert stop_threshold(2) == 16.0


def split_factory(meter, alloc):
    def factory(level, bound):
        return TwoSidedSplit(bound, seed=level + 50, meter=meter, allocator=alloc,
                             name=f"L{level}", offline_cap=bound)

    return factory


def make_tree(n, delta, seed=0):
    meter, alloc = SpaceMeter(), ColorAllocator()
    tree = VertexBipartization(n, delta, seed, meter, alloc, split_factory(meter, alloc))
    return tree, meter, alloc


def test_route_picks_first_differing_bit():
    tree, _, _ = make_tree(256, 128)  # two levels at this scale
    assert tree.num_levels == 2
    tree.bits[0] = 0b01
    tree.bits[1] = 0b00
    tree.bits[2] = 0b11
    tree.bits[3] = 0b01
    assert tree.route(0, 1) == 0
    assert tree.route(1, 2) == 0
    assert tree.route(0, 2) == 1
    assert tree.route(0, 3) == -1  # identical bits: base store


def test_level_zero_cut_is_about_half():
    tree, _, _ = make_tree(1024, 128)
    rng = random.Random(6)
    n_trials = 100_000
    hits = 0
    for i in range(n_trials):
        a, b = 2 * i, 2 * i + 1  # fresh vertex pair each trial
        if tree.route(a, b) == 0:
            hits += 1
    sigma = (0.25 / n_trials) ** 0.5
    assert abs(hits / n_trials - 0.5) <= 3 * sigma


def test_base_store_triangle_uses_three_colors():
    tree, meter, alloc = make_tree(64, 2)  # no levels at this scale
    assert tree.num_levels == 0
    out = []
    out += tree.on_vertex(0, [])
    out += tree.on_vertex(1, [0])
    out += tree.on_vertex(2, [0, 1])
    assert out == []  # everything waits in the base store
    final = tree.finalize()
    assert len(final) == 3
    assert len({a.color for a in final}) == 3
    checker(final)


def test_base_store_single_edge_uses_one_color():
    tree, _, alloc = make_tree(64, 2)
    tree.on_vertex(0, [])
    tree.on_vertex(1, [0])
    final = tree.finalize()
    assert len(final) == 1
    assert alloc.total == 1


def test_bipartite_base_store_is_colored_exactly():
    tree, _, alloc = make_tree(64, 3)
    assert tree.num_levels == 0
    tree.on_vertex(0, [])
    tree.on_vertex(1, [])
    tree.on_vertex(2, [0, 1])
    tree.on_vertex(3, [0, 1])
    tree.on_vertex(4, [0, 1])
    final = tree.finalize()  # K(2,3): bipartite, max degree 3
    assert len(final) == 6
    assert len({a.color for a in final}) == 3
    checker(final)


def test_general_vertex_arrivals_end_to_end():
    n, delta = 64, 6
    rng = random.Random(33)
    # random graph with degree cap, presented in vertex-arrival order
    adj = {v: [] for v in range(n)}
    edges = set()
    for _ in range(400):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b or (min(a, b), max(a, b)) in edges:
            continue
        if len(adj[a]) >= delta or len(adj[b]) >= delta:
            continue
        edges.add((min(a, b), max(a, b)))
        adj[a].append(b)
        adj[b].append(a)
    tree, meter, alloc = make_tree(n, delta, seed=4)
    out = []
    arrived = set()
    for v in range(n):
        nbrs = [w for w in adj[v] if w in arrived]
        out += tree.on_vertex(v, nbrs)
        arrived.add(v)
        assert meter.consistent()
    out += tree.finalize()
    assert len(out) == len(edges)
    assert {(min(a.u, a.v), max(a.u, a.v)) for a in out} == edges
    checker(out)


def test_level_degree_breach_is_fatal():
    tree, _, _ = make_tree(256, 128)
    bound = tree.bounds[0]
    with pytest.raises(BoundViolation):
        tree._bump_level_degree(7, 0, bound + 1)


def test_two_sided_split_routes_both_sides():
    meter, alloc = SpaceMeter(), ColorAllocator()
    split = TwoSidedSplit(3, seed=9, meter=meter, allocator=alloc)
    n = 8
    out = []
    out += split.on_arrival(0, [], 0)
    out += split.on_arrival(n + 0, [0], 1)
    out += split.on_arrival(1, [n + 0], 0)
    out += split.on_arrival(n + 1, [0, 1], 1)
    assert len(out) == 4
    checker(out)
    out += split.finalize()
    report = split.spill_report()
    assert report.spilled_edges == 0


def test_two_sided_split_blocks_are_disjoint():
    meter, alloc = SpaceMeter(), ColorAllocator()
    split = TwoSidedSplit(4, seed=1, meter=meter, allocator=alloc)
    a = split.on_arrival(0, [], 0)
    b = split.on_arrival(100, [0], 1)
    c = split.on_arrival(1, [100], 0)
    colors_side1 = {x.color for x in b}
    colors_side0 = {x.color for x in c}
    assert colors_side0.isdisjoint(colors_side1)
