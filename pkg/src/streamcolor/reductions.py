"""Reductions that lift the bipartite one-sided colorers to richer inputs.

`TwoSidedSplit` handles bipartite streams where either side may arrive:
edges are owned by whichever endpoint arrives with them, so the stream
splits into two one-sided substreams, one per side, colored by two
independent colorers with disjoint blocks.

`Bipartization` handles general graphs. Every vertex draws one random bit
per level; an edge belongs to the first level where its endpoints' bits
differ, which makes each level a bipartite graph (sides = bit value).
Declared level degree bounds shrink geometrically with a 1.5x safety
slack; the recursion stops once the declared bound drops below
max(10 * log2 n, 16), and everything deeper lands in a base store that is
colored offline at the end (exactly if it happens to be bipartite, with
one extra color otherwise). Exceeding a declared level bound is a hard
error: the run stops rather than risking a conflict.
"""

from __future__ import annotations

import math
from typing import Callable

from .core import OneSidedColorer, SpillReport
from .errors import BoundViolation, NotBipartite
from .meter import SpaceMeter
from .offline import OfflineGraph, color_bipartite_exact, color_general
from .palette import ColorAllocator
from .rng import child_rng
from .stream import ColorAssignment


class TwoSidedSplit:
    """Two one-sided colorers, one per side of a bipartite graph."""

    def __init__(
        self,
        delta: int,
        seed: int,
        meter: SpaceMeter,
        allocator: ColorAllocator,
        name: str = "split",
        offline_cap: int | None = None,
    ):
        self.colorers = [
            OneSidedColorer(
                delta,
                child_rng(seed, side),
                meter,
                allocator,
                name=f"{name}:side{side}",
                offline_cap=offline_cap,
            )
            for side in (0, 1)
        ]

    def on_arrival(self, u: int, neighbors: list[int], side: int) -> list[ColorAssignment]:
        return self.colorers[side].on_online_vertex(u, neighbors)

    def finalize(self) -> list[ColorAssignment]:
        return self.colorers[0].finalize() + self.colorers[1].finalize()

    def spill_report(self) -> SpillReport:
        return SpillReport(
            sum(c.spilled_vertices for c in self.colorers),
            sum(c.spilled_edges_total for c in self.colorers),
        )


def stop_threshold(n: int) -> float:
    return max(10.0 * math.log2(max(n, 2)), 16.0)


def level_degree_bound(delta: int, level: int) -> int:
    """Declared bound for one level: ceil(1.5 * ceil(delta / 2^level))."""
    x = -(-delta // (1 << level))
    return ( 3 * x + 1) // 2


def plan_levels(n: int, delta: int) -> list[int]:
    """Declared degree bounds of the levels the recursion will create."""
    threshold = stop_threshold(n)
    bounds = []
    level = 0
    while True:
        d = level_degree_bound(delta, level)
        if d < threshold or d < 1:
            break
        bounds.append(d)
        level += 1
    return bounds


class Bipartization:
    """Random recursive 2-partition routing edges to bipartite levels.

    The per-level algorithm is supplied by `level_factory(level, bound)`,
    which must return an object exposing the part of the level interface
    the caller drives (vertex arrivals or edge feeds) plus `finalize()`
    and `spill_report()`.
    """

    def __init__(
        self,
        n: int,
        delta: int,
        seed: int,
        meter: SpaceMeter,
        allocator: ColorAllocator,
        level_factory: Callable[[int, int], object],
        name: str = "bipart",
    ):
        self.delta = delta
        self.meter = meter
        self.allocator = allocator
        self.name = name
        self.bounds = plan_levels(n, delta)
        self.levels = [level_factory(i, d) for i, d in enumerate(self.bounds)]
        self.num_levels = len(self.levels)
        self.rng = child_rng(seed, 0xB1)
        self.bits: dict[int, int] = {}
        self.level_degrees: list[dict[int, int]] = [{} for _ in self.bounds]
        self.base_edges: list[tuple[int, int]] = []
        self._bitkey = f"{name}:bits"
        self._dkey = f"{name}:level-degrees"
        self._basekey = f"{name}:base-store"

    def bit_vector(self, v: int) -> int:
        bv = self.bits.get(v)
        if bv is None:
            bv = self.rng.getrandbits(self.num_levels) if self.num_levels else 0
            self.bits[v] = bv
            self.meter.add(self._bitkey, 1)
        return bv

    def route(self, u: int, v: int) -> int:
        """Level of the first differing bit, or -1 for the base store."""
        diff = self.bit_vector(u) ^ self.bit_vector(v)
        if diff == 0:
            return -1
        return (diff & -diff).bit_length() - 1

    def side_of(self, v: int, level: int) -> int:
        return (self.bit_vector(v) >> level) & 1

    def _bump_level_degree(self, v: int, level: int, amount: int) -> None:
        degs = self.level_degrees[level]
        d = degs.get(v)
        if d is None:
            d = 0
            self.meter.add(self._dkey, 1)
        d += amount
        if d > self.bounds[level]:
            raise BoundViolation(
                f"{self.name}: vertex {v} reached degree {d} at level {level}, "
                f"declared bound {self.bounds[level]}"
            )
        degs[v] = d

    def _store_base(self, u: int, v: int) -> None:
        self.base_edges.append((u, v))
        self.meter.add(self._basekey, 2)

    def _color_base(self) -> list[ColorAssignment]:
        edges = self.base_edges
        if not edges:
            return []
        graph = OfflineGraph(edges)
        try:
            graph.bipartition()
            width = graph.max_degree
            colors = None
        except NotBipartite:
            width = graph.max_degree + 1
            colors = color_general(graph, self.meter)
        fresh = self.allocator.reserve(width, f"{self.name}:base")
        if colors is None:
            colors = color_bipartite_exact(graph, self.meter)
        out = [ColorAssignment(a, b, fresh + c) for (a, b), c in zip(edges, colors)]
        self.meter.release(self._basekey, 2 * len(edges))
        self.base_edges = []
        return out

    def spill_report(self) -> SpillReport:
        reports = [lvl.spill_report() for lvl in self.levels]
        return SpillReport(
            sum(r.spilled_vertices for r in reports),
            sum(r.spilled_edges for r in reports),
        )


class VertexBipartization(Bipartization):
    """Vertex-arrival flavor: one arrival fans out into per-level arrivals.

    The arriving vertex is online in every level that receives a piece of
    its edge group; within a level it goes to the colorer of its own side.
    Levels are `TwoSidedSplit` instances.
    """

    def on_vertex(self, u: int, neighbors: list[int]) -> list[ColorAssignment]:
        out: list[ColorAssignment] = []
        groups: dict[int, list[int]] = {}
        for v in neighbors:
            level = self.route(u, v)
            if level < 0:
                self._store_base(u, v)
            else:
                groups.setdefault(level, []).append(v)
        for level, group in groups.items():
            self._bump_level_degree(u, level, len(group))
            for v in group:
                self._bump_level_degree(v, level, 1)
            side = self.side_of(u, level)
            out.extend(self.levels[level].on_arrival(u, group, side))
        return out

    def finalize(self) -> list[ColorAssignment]:
        out: list[ColorAssignment] = []
        for lvl in self.levels:
            out.extend(lvl.finalize())
        out.extend(self._color_base())
        return out


class EdgeBipartization(Bipartization):
    """Edge-arrival flavor: each edge feeds the dispatcher of its level.

    `feeder(level_obj, online_endpoint, other, level)` adapts the call to
    whatever per-level dispatcher the factory produced.
    """

    def __init__(self, *args, feeder=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.feeder = feeder

    def on_edge(self, a: int, b: int) -> list[ColorAssignment]:
        level = self.route(a, b)
        if level < 0:
            self._store_base(a, b)
            return []
        self._bump_level_degree(a, level, 1)
        self._bump_level_degree(b, level, 1)
        # the bit-1 endpoint is the designated online side within a level
        u, v = (a, b) if self.side_of(a, level) == 1 else (b, a)
        return self.feeder(self.levels[level], u, v, level)

    def finalize(self) -> list[ColorAssignment]:
        out: list[ColorAssignment] = []
        for lvl in self.levels:
            out.extend(lvl.finalize())
        out.extend(self._color_base())
        return out
