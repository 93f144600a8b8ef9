"""One-pass edge coloring for one-sided arrivals, whole or batched.

`OneSidedColorer` handles a bipartite stream where offline vertices hold
shifted-proposal state and online vertices arrive with their edges, either
all at once or in fixed-size batches. Per arrival it builds the color
graph of proposals, finds a perfect matching of edges to base colors, and
streams the banded colors out. Arrivals whose color graph has no perfect
matching (rare by the k-out analysis) are parked in a spill set and
colored at the end with a fresh block via the exact bipartite colorer.

Color layout within this colorer's block of the global space:

    vertex mode   [0, 3P)                 then a fresh spill block
    batch mode    [0, max_batches * 3P)   batch b maps to [b*3P, (b+1)*3P)

Degrees keep counting even for spilled edges, so proposals made after a
spill stay distinct from everything the offline vertex ever proposed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BatchSizeMismatch, BoundViolation, TooManyBatches, TooManySlots
from .matching import maximum_matching
from .meter import SpaceMeter
from .offline import OfflineGraph, color_bipartite_exact
from .palette import ColorAllocator, OfflineState, PaletteParams, draw_offline_state
from .stream import ColorAssignment


@dataclass(frozen=True)
class SpillReport:
    spilled_vertices: int  # arrivals whose edges went to the spill set
    spilled_edges: int


class OneSidedColorer:
    """Streaming colorer for one online arrival (or batch) at a time.

    Args:
        delta: degree bound this instance is sized for (sets P).
        rng: source for shift draws; owned by the caller.
        meter: word ledger charged for shifts, counters, spill, scratch.
        allocator: global color space; a streaming block is reserved now,
            the spill block only if a spill happens.
        batch_size: fixed batch width k, enables `on_batch`.
        max_batches: cap on batches per online vertex; defaults to
            ceil(delta / batch_size).
        offline_cap: max degree an offline vertex may reach here. Defaults
            to P, the boundary beyond which proposal distinctness (and so
            properness) would break; crossing it raises BoundViolation
            rather than ever risking a conflict.
    """

    def __init__(
        self,
        delta: int,
        rng: random.Random,
        meter: SpaceMeter,
        allocator: ColorAllocator,
        *,
        batch_size: int | None = None,
        max_batches: int | None = None,
        offline_cap: int | None = None,
        name: str = "one-sided",
    ):
        self.params = PaletteParams.for_delta(delta)
        self.delta = delta
        self.rng = rng
        self.meter = meter
        self.name = name
        p = self.params.period
        self.batch_size = batch_size
        if batch_size is not None:
            self.max_batches = max_batches if max_batches is not None else -(-delta // batch_size)
        else:
            self.max_batches = 1
        self.offline_cap = offline_cap if offline_cap is not None else p
        if delta == 1:
            # a degree-1 graph is a matching; one color covers everything
            self.block = allocator.reserve(1, f"{name}:stream")
            self.block_width = 1
        else:
            self.block_width = 3 * p * self.max_batches
            self.block = allocator.reserve(self.block_width, f"{name}:stream")
        self.allocator = allocator
        self.states: dict[int, OfflineState] = {}
        self.batch_counters: dict[int, int] = {}
        self.spill: list[tuple[int, int]] = []
        self.spilled_vertices = 0
        self.spilled_edges_total = 0
        self._mkey = f"{name}:state"
        self._skey = f"{name}:spill"
        self._tkey = f"{name}:scratch"
        self._finalized = False

    # -- arrival handling --

    def on_online_vertex(self, u: int, neighbors: list[int]) -> list[ColorAssignment]:
        """Color all edges of a whole online arrival (or spill them)."""
        return self._color_arrival(u, neighbors, 0)

    def on_batch(self, u: int, neighbors: list[int]) -> list[ColorAssignment]:
        """Color one exact-size batch; colors carry the batch index."""
        if self.batch_size is None or len(neighbors) != self.batch_size:
            raise BatchSizeMismatch(
                f"batch of {len(neighbors)} edges, expected exactly {self.batch_size}"
            )
        seen = self.batch_counters.get(u)
        if seen is None:
            self.meter.add(self._mkey, 1)
            seen = 0
        if seen >= self.max_batches:
            raise TooManyBatches(f"vertex {u} exceeds {self.max_batches} batches")
        self.batch_counters[u] = seen + 1
        return self._color_arrival(u, neighbors, seen)

    def _color_arrival(self, u: int, neighbors, batch_index: int) -> list[ColorAssignment]:
        d = len(neighbors)
        if d == 0:
            return []
        if d > self.delta:
            raise TooManySlots(f"arrival of {d} edges exceeds the degree bound {self.delta}")
        meter = self.meter
        p = self.params.period
        cap = self.offline_cap

        states = []
        for v in neighbors:
            st = self.states.get(v)
            if st is None:
                st = draw_offline_state(self.rng, self.params)
                self.states[v] = st
                meter.add(self._mkey, OfflineState.WORDS)
            if st.deg >= cap:
                raise BoundViolation(
                    f"{self.name}: offline vertex {v} would pass its degree cap {cap}"
                )
            states.append(st)

        if self.delta == 1:
            st = states[0]
            st.deg += 1
            return [ColorAssignment(u, neighbors[0], self.block)]

        slots = []
        for st in states:
            dg = st.deg
            slots.append(((st.r1 + dg) % p, (st.r2 + dg) % p, (st.r3 + dg) % p))

        scratch = 6 * d  # proposals plus matcher state, released below
        meter.add(self._tkey, scratch)
        matched = maximum_matching(slots)
        meter.release(self._tkey, scratch)

        base = self.block + batch_index * 3 * p
        out: list[ColorAssignment] = []
        if all(c != -1 for c in matched):
            for i, v in enumerate(neighbors):
                y = matched[i]
                band = slots[i].index(y)
                states[i].deg += 1
                out.append(ColorAssignment(u, v, base + band * p + y))
        else:
            for i, v in enumerate(neighbors):
                states[i].deg += 1
                self.spill.append((u, v))
            meter.add(self._skey, 2 * d)
            self.spilled_vertices += 1
            self.spilled_edges_total += d
        return out

    # -- end of stream --

    def finalize(self) -> list[ColorAssignment]:
        """Color the spill set with a fresh block and empty it."""
        if self._finalized:
            return []
        self._finalized = True
        if not self.spill:
            return []
        edges = self.spill
        meter = self.meter
        meter.release(self._skey, 2 * len(edges))
        sides = {}
        for a, b in edges:  # spill edges are stored (online, offline)
            sides[a] = 0
            sides[b] = 1
        graph = OfflineGraph(edges, sides)
        fresh = self.allocator.reserve(graph.max_degree, f"{self.name}:spill")
        colors = color_bipartite_exact(graph, meter)
        out = [ColorAssignment(a, b, fresh + c) for (a, b), c in zip(edges, colors)]
        self.spill = []
        return out

    def spill_report(self) -> SpillReport:
        return SpillReport(self.spilled_vertices, self.spilled_edges_total)
