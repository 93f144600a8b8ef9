"""Exact offline edge colorers for stored subgraphs.

Three colorers, all proper by construction:

* `color_bipartite_exact` colors a bipartite graph with exactly its max
  degree D, inserting edges one at a time. Each edge takes the lowest
  color free at both endpoints; when none is shared, one alternating
  two-colored path is flipped, which frees a shared color. O(m * D)
  worst case, ample for the buffer flushes and spill sets it serves.
* `color_general` colors any simple graph with at most D + 1 colors by
  the fan-rotation construction: build a maximal fan, invert one
  two-colored path, rotate a fan prefix.
* `color_greedy` gives each edge the lowest color unused at either
  endpoint, never exceeding 2D - 1.

Edges are processed in input order and color searches are lowest-first,
so results are deterministic. Scratch tables are charged to the passed
meter (2 table entries plus 1 result word per edge) and released on exit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotBipartite
from .meter import SpaceMeter

Edge = tuple[int, int]


@dataclass
class OfflineGraph:
    """A finite simple graph held in memory, with an optional side witness."""

    edges: list[Edge]
    sides: dict[int, int] | None = None  # vertex -> 0/1, every edge crossing

    @property
    def max_degree(self) -> int:
        deg: dict[int, int] = {}
        for a, b in self.edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return max(deg.values(), default=0)

    def bipartition(self) -> dict[int, int]:
        """The stored witness, or a 2-coloring found by search.

        Raises NotBipartite when an odd cycle makes a witness impossible.
        """
        if self.sides is not None:
            for a, b in self.edges:
                if self.sides.get(a) == self.sides.get(b):
                    raise NotBipartite(f"witness puts edge ({a}, {b}) inside one side")
            return self.sides
        adj: dict[int, list[int]] = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        side: dict[int, int] = {}
        for start in adj:
            if start in side:
                continue
            side[start] = 0
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in side:
                        side[y] = side[x] ^ 1
                        stack.append(y)
                    elif side[y] == side[x]:
                        raise NotBipartite("odd cycle found")
        return side


def _scratch_words(m: int) -> int:
    return 3 * m  # two color-table entries plus one result word per edge


def color_bipartite_exact(graph: OfflineGraph, meter: SpaceMeter | None = None) -> list[int]:
    """Proper coloring of a bipartite graph with colors in [0, max degree)."""
    graph.bipartition()  # validates the witness / raises NotBipartite
    edges = graph.edges
    if not edges:
        return []
    dmax = graph.max_degree
    words = _scratch_words(len(edges))
    if meter:
        meter.add("offline-scratch", words)

    # table[v][color] = index of the edge carrying that color at v
    table: dict[int, dict[int, int]] = {}
    colors = [-1] * len(edges)

    def lowest_free(v: int) -> int:
        used = table.get(v, ())
        for c in range(dmax):
            if c not in used:
                return c
        raise AssertionError("no free color below max degree")

    for idx, (u, v) in enumerate(edges):
        tu = table.setdefault(u, {})
        tv = table.setdefault(v, {})
        shared = -1
        for c in range(dmax):
            if c not in tu and c not in tv:
                shared = c
                break
        if shared >= 0:
            colors[idx] = shared
            tu[shared] = idx
            tv[shared] = idx
            continue

        alpha = lowest_free(u)
        beta = lowest_free(v)
        # Collect the alpha/beta alternating path starting at v. Since v
        # misses beta it is a path endpoint, and in a bipartite graph the
        # path can never reach u (it would need the color u misses on the
        # wrong side). Flipping it frees alpha at v while keeping the
        # coloring proper.
        path: list[int] = []
        x, want = v, alpha
        while True:
            e = table[x].get(want)
            if e is None:
                break
            path.append(e)
            a, b = edges[e]
            x = b if a == x else a
            want = beta if want == alpha else alpha
        for e in path:  # two-phase flip so table entries never collide
            old = colors[e]
            a, b = edges[e]
            del table[a][old]
            del table[b][old]
        for e in path:
            new = beta if colors[e] == alpha else alpha
            colors[e] = new
            a, b = edges[e]
            table[a][new] = e
            table[b][new] = e
        colors[idx] = alpha
        tu[alpha] = idx
        tv[alpha] = idx

    if meter:
        meter.release("offline-scratch", words)
    return colors


def color_general(graph: OfflineGraph, meter: SpaceMeter | None = None) -> list[int]:
    """Proper coloring of any simple graph with colors in [0, max degree + 1)."""
    edges = graph.edges
    if not edges:
        return []
    palette = graph.max_degree + 1
    words = _scratch_words(len(edges))
    if meter:
        meter.add("offline-scratch", words)

    table: dict[int, dict[int, int]] = {}  # vertex -> color -> neighbor
    colors: dict[Edge, int] = {}

    def key(a: int, b: int) -> Edge:
        return (a, b) if a < b else (b, a)

    def used(v: int) -> dict[int, int]:
        return table.setdefault(v, {})

    def lowest_free(v: int) -> int:
        uv = used(v)
        for c in range(palette):
            if c not in uv:
                return c
        raise AssertionError("no free color within max degree + 1")

    def paint(a: int, b: int, c: int) -> None:
        colors[key(a, b)] = c
        used(a)[c] = b
        used(b)[c] = a

    def unpaint(a: int, b: int) -> int:
        c = colors.pop(key(a, b))
        del used(a)[c]
        del used(b)[c]
        return c

    def invert_path(start: int, c: int, d: int) -> None:
        # maximal path from `start` whose edges alternate d, c; collect it
        # first, then swap the two colors in one pass
        path: list[Edge] = []
        x, want = start, d
        while True:
            y = used(x).get(want)
            if y is None:
                break
            path.append((x, y))
            x = y
            want = c if want == d else d
        flipped = [(a, b, unpaint(a, b)) for a, b in path]
        for a, b, old in flipped:
            paint(a, b, c if old == d else d)

    def fan_holds(u: int, fan: list[int], upto: int) -> bool:
        # the defining chain: the color of (u, fan[i+1]) is free at fan[i]
        for i in range(upto):
            nxt_color = colors.get(key(u, fan[i + 1]))
            if nxt_color is None or nxt_color in used(fan[i]):
                return False
        return True

    for u, v in edges:
        if key(u, v) in colors:
            continue
        fan = [v]
        in_fan = {v}
        # colored edges at u, lowest color first; fixed while the fan grows
        candidates = sorted(used(u).items())
        while True:  # extend to a maximal fan
            last_used = used(fan[-1])
            for c, w in candidates:
                if c not in last_used and w not in in_fan:
                    fan.append(w)
                    in_fan.add(w)
                    break
            else:
                break

        c = lowest_free(u)
        d = lowest_free(fan[-1])
        if d in used(u):
            invert_path(u, c, d)  # afterwards d is free at u
        if d in used(u):
            raise AssertionError("path inversion failed to free the fan color")

        target = -1
        for j in range(len(fan)):
            if d not in used(fan[j]) and fan_holds(u, fan, j):
                target = j
                break
        if target == -1:
            raise AssertionError("no rotatable fan prefix")
        # rotate the prefix: each fan edge takes the color of its successor,
        # the tip takes d; strip old colors first so nothing collides at u
        chain = [colors[key(u, fan[i + 1])] for i in range(target)]
        for i in range(1, target + 1):
            unpaint(u, fan[i])
        for i in range(target):
            paint(u, fan[i], chain[i])
        paint(u, fan[target], d)

    out = [colors[key(a, b)] for a, b in edges]
    if meter:
        meter.release("offline-scratch", words)
    return out


def color_greedy(graph: OfflineGraph, meter: SpaceMeter | None = None) -> list[int]:
    """Lowest color unused at both endpoints; at most 2 * max degree - 1."""
    edges = graph.edges
    if not edges:
        return []
    words = _scratch_words(len(edges))
    if meter:
        meter.add("offline-scratch", words)
    used: dict[int, set[int]] = {}
    colors = []
    for a, b in edges:
        ua = used.setdefault(a, set())
        ub = used.setdefault(b, set())
        c = 0
        while c in ua or c in ub:
            c += 1
        ua.add(c)
        ub.add(c)
        colors.append(c)
    if meter:
        meter.release("offline-scratch", words)
    return colors
