"""Color graphs and perfect matchings between edge slots and base colors.

When an online vertex arrives, each of its edges becomes a slot adjacent
to the three base colors currently proposed by its offline endpoint. A
perfect matching of slots to base colors yields a conflict-free color
choice for the whole arrival: matched base colors are pairwise distinct,
and re-adding each slot's band offset keeps them distinct.

`perfect_match` runs Hopcroft-Karp with the right side stored sparsely
(only colors actually proposed), so one call costs O(slots) space and can
be discarded before the next arrival. All tie-breaks are fixed (lowest
color id first, then lowest slot id), making runs reproducible.

`brute_force_match` is the independent oracle used by the tests, and
`kout_trial` samples the random k-out model that the spill analysis rests
on: each left vertex picks k uniform distinct right vertices, and we ask
whether a perfect matching exists.
"""

from __future__ import annotations

import random
from collections import deque

from .errors import InstanceTooLarge, TooManySlots
from .palette import OfflineState, PaletteParams, propose_bases

_INF = float("inf")


class ColorGraph:
    """Left: edge slots, each with a few distinct base colors. Right: implicit."""

    __slots__ = ("slots",)

    def __init__(self, slots: list[tuple[int, ...]]):
        self.slots = slots

    def __len__(self) -> int:
        return len(self.slots)


def build_color_graph(states: list[OfflineState], params: PaletteParams) -> ColorGraph:
    """One slot per arriving edge, adjacent to its three current proposals."""
    if len(states) > params.delta:
        raise TooManySlots(f"{len(states)} slots exceed delta={params.delta}")
    return ColorGraph([propose_bases(st, params) for st in states])


def maximum_matching(slots: list[tuple[int, ...]]) -> list[int]:
    """Hopcroft-Karp over slot -> color adjacency.

    Returns the matched color per slot (-1 if unmatched). Neighbors are
    scanned in ascending color order and free slots in index order, so the
    result is a pure function of the input.
    """
    n = len(slots)
    adj = [sorted(s) for s in slots]
    match_slot = [-1] * n
    match_color: dict[int, int] = {}
    dist = [0] * n

    while True:
        queue: deque[int] = deque()
        for i in range(n):
            if match_slot[i] == -1:
                dist[i] = 0
                queue.append(i)
            else:
                dist[i] = -1
        reachable_free = False
        while queue:
            i = queue.popleft()
            for c in adj[i]:
                j = match_color.get(c, -1)
                if j == -1:
                    reachable_free = True
                elif dist[j] == -1:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        if not reachable_free:
            break

        def advance(i: int) -> bool:
            for c in adj[i]:
                j = match_color.get(c, -1)
                if j == -1 or (dist[j] == dist[i] + 1 and advance(j)):
                    match_slot[i] = c
                    match_color[c] = i
                    return True
            dist[i] = -1
            return False

        for i in range(n):
            if match_slot[i] == -1:
                advance(i)

    return match_slot


def perfect_match(graph: ColorGraph) -> list[tuple[int, int]] | None:
    """A perfect matching saturating every slot, or None.

    Each entry is (base color, band index), the band being the position of
    the chosen color in the slot's proposal tuple.
    """
    slots = graph.slots
    match_slot = maximum_matching(slots)
    if any(c == -1 for c in match_slot):
        return None
    return [(c, slots[i].index(c)) for i, c in enumerate(match_slot)]


def brute_force_match(graph: ColorGraph) -> list[tuple[int, int]] | None:
    """Exhaustive per-slot choice search; the test oracle for `perfect_match`.

    Tries colors in ascending order per slot, so the first assignment found
    is lexicographically least. Rejects instances with more than 12 slots.
    """
    slots = graph.slots
    n = len(slots)
    if n > 12:
        raise InstanceTooLarge(f"{n} slots exceed the exhaustive limit of 12")
    choice = [(-1, -1)] * n
    used: set[int] = set()

    def assign(i: int) -> bool:
        if i == n:
            return True
        for c in sorted(slots[i]):
            if c not in used:
                used.add(c)
                choice[i] = (c, slots[i].index(c))
                if assign(i + 1):
                    return True
                used.remove(c)
        return False

    return list(choice) if assign(0) else None


def sample_distinct(rng: random.Random, n: int, k: int) -> list[int]:
    """A uniform k-subset of [0, n) by partial Fisher-Yates with sparse swaps."""
    swaps: dict[int, int] = {}
    out = []
    for i in range(k):
        j = rng.randrange(i, n)
        vi = swaps.get(i, i)
        vj = swaps.get(j, j)
        swaps[i], swaps[j] = vj, vi
        out.append(vj)
    return out


def kout_trial(n: int, u_size: int, k: int, rng: random.Random) -> bool:
    """Sample one k-out instance and report whether it has a perfect matching."""
    if not 1 <= k <= u_size:
        raise ValueError("need u_size >= k >= 1")
    slots = [tuple(sample_distinct(rng, u_size, k)) for _ in range(n)]
    return all(c != -1 for c in maximum_matching(slots))
