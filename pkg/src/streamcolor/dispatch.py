"""Edge-arrival adapters: buffering into exact-size batches plus the
random shift decompositions that keep sub-colorer degrees balanced.

`BatchIndexDispatcher` serves the sqrt regime. Edges are buffered under
their designated online endpoint; whenever a vertex holds k = ceil(sqrt(D))
edges they leave as one batch, routed by the vertex's random batch shift
b_u to one of k whole-vertex colorers, each sized for degree 2k. The shift
makes each edge's batch index uniform, so no sub-colorer's offline side
concentrates, even when an adversary frontloads all edges of one vertex.

`GroupedBatchDispatcher` serves the general space budget n*s. The buffer
is capped at n*s edges and both endpoints count. At each cap checkpoint,
vertices holding at least k edges are drained batch by batch; batches are
grouped (ceil(k/s) batches per group) and the group shift g_u routes each
group to one of s batch-mode colorers per side. If the checkpoint finds no
such vertex, the whole buffer (max degree below k) is colored offline with
one fresh block and dropped.

Leftover buffered edges at end of stream are colored offline with a final
fresh block. Every input edge is emitted exactly once: through a
sub-colorer, a flush block, a spill block, or the leftover block.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable

from .core import OneSidedColorer, SpillReport
from .errors import BoundViolation, FlushBudgetExceeded
from .meter import SpaceMeter
from .offline import OfflineGraph, color_bipartite_exact
from .palette import ColorAllocator
from .rng import child_rng
from .stream import ColorAssignment


def ceil_sqrt(n: int) -> int:
    k = math.isqrt(n)
    return k if k * k == n else k + 1


def batch_route(batch_number: int, shift: int, k: int) -> int:
    """Sub-colorer index for a vertex's next batch (1-based batch count)."""
    return (batch_number + shift) % k


def group_route(batch_number: int, group_width: int, shift: int, s: int) -> int:
    """Sub-colorer index from the batch's group number (1-based count)."""
    group = -(-batch_number // group_width)
    return (group + shift) % s


class BatchIndexDispatcher:
    """Buffers edges per online vertex; full batches fan out over k colorers."""

    def __init__(
        self,
        delta: int,
        seed: int,
        meter: SpaceMeter,
        allocator: ColorAllocator,
        name: str = "sqrt",
    ):
        self.delta = delta
        self.k = ceil_sqrt(delta)
        self.max_batches = -(-delta // self.k)  # <= k, so batch indices stay injective
        self.meter = meter
        self.name = name
        self.rng = child_rng(seed, 0)
        self.subs = [
            OneSidedColorer(
                2 * self.k,
                child_rng(seed, 1 + i),
                meter,
                allocator,
                name=f"{name}:H{i}",
            )
            for i in range(self.k)
        ]
        self.allocator = allocator
        self.buffers: dict[int, deque[int]] = {}
        self.batch_count: dict[int, int] = {}
        self.batch_shift: dict[int, int] = {}
        self.buffered = 0
        self._bkey = f"{name}:buffer"
        self._ckey = f"{name}:counters"

    def feed_edge(self, u: int, v: int) -> list[ColorAssignment]:
        """Insert one edge, oriented (designated online endpoint, other)."""
        buf = self.buffers.get(u)
        if buf is None:
            buf = self.buffers[u] = deque()
        buf.append(v)
        self.buffered += 1
        self.meter.add(self._bkey, 2)
        if len(buf) < self.k:
            return []

        batch = [buf.popleft() for _ in range(self.k)]
        self.buffered -= self.k
        self.meter.release(self._bkey, 2 * self.k)
        count = self.batch_count.get(u)
        if count is None:
            count = 0
            self.batch_shift[u] = self.rng.randrange(self.k)
            self.meter.add(self._ckey, 2)
        count += 1
        if count > self.max_batches:
            raise BoundViolation(f"{self.name}: vertex {u} exceeded {self.max_batches} batches")
        self.batch_count[u] = count
        x = batch_route(count, self.batch_shift[u], self.k)
        return self.subs[x].on_online_vertex(u, batch)

    def finalize(self) -> list[ColorAssignment]:
        out: list[ColorAssignment] = []
        leftover: list[tuple[int, int]] = []
        for u, buf in self.buffers.items():
            leftover.extend((u, v) for v in buf)
        if leftover:
            sides = {}
            for a, b in leftover:
                sides[a] = 0
                sides[b] = 1
            graph = OfflineGraph(leftover, sides)
            fresh = self.allocator.reserve(graph.max_degree, f"{self.name}:leftover")
            for (a, b), c in zip(leftover, color_bipartite_exact(graph, self.meter)):
                out.append(ColorAssignment(a, b, fresh + c))
            self.meter.release(self._bkey, 2 * len(leftover))
            self.buffered = 0
            self.buffers.clear()
        for sub in self.subs:
            out.extend(sub.finalize())
        return out

    def spill_report(self) -> SpillReport:
        return SpillReport(
            sum(s.spilled_vertices for s in self.subs),
            sum(s.spilled_edges_total for s in self.subs),
        )


class GroupedBatchDispatcher:
    """Capped buffer with batch draining, group-shift routing, and flushes."""

    def __init__(
        self,
        delta: int,
        s: int,
        cap: int,
        side_of: Callable[[int], int],
        seed: int,
        meter: SpaceMeter,
        allocator: ColorAllocator,
        flush_bound: int,
        name: str = "general",
    ):
        self.delta = delta
        self.k = ceil_sqrt(delta)
        self.s = max(1, min(s, self.k))  # s beyond ceil(sqrt(delta)) buys nothing
        self.group_width = -(-self.k // self.s)
        self.max_groups = self.s
        # palette sizing: offline side concentrates to ~2*delta/s under the
        # shifts; the online side is capped outright by a group's edges
        sub_delta = max(-(-2 * delta // self.s), min(self.group_width * self.k, delta))
        self.cap = cap
        self.side_of = side_of
        self.meter = meter
        self.allocator = allocator
        self.name = name
        self.flush_bound = flush_bound
        self.flushes = 0
        self.rng = child_rng(seed, 0)
        self.arrays = [
            [
                OneSidedColorer(
                    sub_delta,
                    child_rng(seed, 1 + side * self.s + i),
                    meter,
                    allocator,
                    batch_size=self.k,
                    max_batches=self.group_width,
                    name=f"{name}:side{side}:G{i}",
                )
                for i in range(self.s)
            ]
            for side in (0, 1)
        ]

        self.adj: dict[int, deque[tuple[int, int]]] = {}
        self.alive: list[bool] = []
        self.counts: dict[int, int] = {}
        self.ready: deque[int] = deque()
        self.size = 0
        self.batch_count: dict[int, int] = {}
        self.group_shift: dict[int, int] = {}
        self._bkey = f"{name}:buffer"
        self._ckey = f"{name}:counters"

    def feed_edge(self, a: int, b: int) -> list[ColorAssignment]:
        eid = len(self.alive)
        self.alive.append(True)
        for x, y in ((a, b), (b, a)):
            lst = self.adj.get(x)
            if lst is None:
                lst = self.adj[x] = deque()
            lst.append((y, eid))
            cnt = self.counts.get(x, 0) + 1
            self.counts[x] = cnt
            if cnt == self.k:
                self.ready.append(x)
        self.size += 1
        self.meter.add(self._bkey, 4)
        if self.size < self.cap:
            return []
        return self._checkpoint()

    def _checkpoint(self) -> list[ColorAssignment]:
        # drain every vertex holding a full batch, then flush if still full
        out: list[ColorAssignment] = []
        while True:
            u = self._pop_ready()
            if u is not None:
                out.extend(self._extract(u))
                continue
            if self.size >= self.cap:
                out.extend(self._flush())
            return out

    def _pop_ready(self) -> int | None:
        while self.ready:
            u = self.ready.popleft()
            if self.counts.get(u, 0) >= self.k:
                return u
        return None

    def _extract(self, u: int) -> list[ColorAssignment]:
        k = self.k
        lst = self.adj[u]
        batch: list[int] = []
        while len(batch) < k:
            v, eid = lst.popleft()
            if not self.alive[eid]:
                continue
            self.alive[eid] = False
            batch.append(v)
            self.counts[v] -= 1
        self.counts[u] -= k
        if self.counts[u] >= k:
            self.ready.append(u)
        self.size -= k
        self.meter.release(self._bkey, 4 * k)

        count = self.batch_count.get(u)
        if count is None:
            count = 0
            self.group_shift[u] = self.rng.randrange(self.s)
            self.meter.add(self._ckey, 2)
        count += 1
        self.batch_count[u] = count
        group = -(-count // self.group_width)
        if group > self.max_groups:
            raise BoundViolation(f"{self.name}: vertex {u} exceeded {self.max_groups} groups")
        idx = (group + self.group_shift[u]) % self.s
        side = self.side_of(u)
        return self.arrays[side][idx].on_batch(u, batch)

    def _collect_live(self) -> list[tuple[int, int]]:
        edges: list[tuple[int, int]] = []
        for x, lst in self.adj.items():
            while lst:
                y, eid = lst.popleft()
                if self.alive[eid]:
                    self.alive[eid] = False
                    edges.append((x, y))
        self.counts.clear()
        self.ready.clear()
        released = self.size
        self.size = 0
        self.meter.release(self._bkey, 4 * released)
        self.adj.clear()
        return edges

    def _flush(self) -> list[ColorAssignment]:
        # every vertex holds under k buffered edges here, so one block of
        # fewer than k fresh colors covers the whole buffer
        self.flushes += 1
        if self.flushes > self.flush_bound:
            raise FlushBudgetExceeded(
                f"{self.name}: {self.flushes} flushes exceed the bound {self.flush_bound}"
            )
        edges = self._collect_live()
        if not edges:
            return []
        sides = {v: self.side_of(v) for e in edges for v in e}
        graph = OfflineGraph(edges, sides)
        dmax = graph.max_degree
        if dmax >= self.k:
            raise AssertionError("flush with a full batch still buffered")
        fresh = self.allocator.reserve(dmax, f"{self.name}:flush{self.flushes}")
        colors = color_bipartite_exact(graph, self.meter)
        return [ColorAssignment(a, b, fresh + c) for (a, b), c in zip(edges, colors)]

    def finalize(self) -> list[ColorAssignment]:
        out: list[ColorAssignment] = []
        edges = self._collect_live()
        if edges:
            sides = {v: self.side_of(v) for e in edges for v in e}
            graph = OfflineGraph(edges, sides)
            fresh = self.allocator.reserve(graph.max_degree, f"{self.name}:leftover")
            for (a, b), c in zip(edges, color_bipartite_exact(graph, self.meter)):
                out.append(ColorAssignment(a, b, fresh + c))
        for side in (0, 1):
            for sub in self.arrays[side]:
                out.extend(sub.finalize())
        return out

    def spill_report(self) -> SpillReport:
        subs = [s for side in self.arrays for s in side]
        return SpillReport(
            sum(s.spilled_vertices for s in subs),
            sum(s.spilled_edges_total for s in subs),
        )
