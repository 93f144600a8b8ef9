"""Stream generators, the output verifier, and experiment runners.

Generators are deterministic functions of their seed: the same spec
always produces a byte-identical stream file. Families:

    regular-bipartite     union of delta disjoint shifted matchings
                          between two sides of size n (degree exactly delta)
    random-bipartite      random neighbor sets with both sides capped
    regular-general       relabeled circulant, degree exactly delta
    adversarial-frontload regular bipartite graph ordered so each offline
                          vertex's edges appear consecutively and as early
                          as possible (the order that defeats unshifted
                          batch decompositions)

The verifier is the independent oracle for whole runs: it replays the
stream, collects the output, and checks that every edge was colored
exactly once and that no two edges sharing an endpoint share a color.
It may use unbounded memory; it is harness code, never metered.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import BoundViolation, FlushBudgetExceeded, InfeasibleSpec, MalformedLine
from .matching import kout_trial
from .presets import run_stream
from .rng import child_rng
from .stream import (
    MODE_BATCH,
    MODE_EDGE,
    MODE_VERTEX_ONE_SIDED,
    MODE_VERTEX_TWO_SIDED,
    EdgeArrival,
    StreamHeader,
    parse_output,
    parse_stream,
)

FAMILIES = (
    "regular-bipartite",
    "random-bipartite",
    "regular-general",
    "adversarial-frontload",
)

CSV_HEADER = (
    "preset,family,n,delta,s,seed,proper,colors_used,budget,"
    "peak_words,spilled_vertices,spilled_edges,millis"
)


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    delta: int
    mode: str
    seed: int
    batch_size: int = 0  # batch mode only; 0 means ceil(sqrt(delta))


# --- graph construction (edge lists with exact degree control) ---


def _bipartite_regular_edges(n: int, delta: int, rng) -> list[tuple[int, int]]:
    # union of delta disjoint matchings: left x joins right perm[(x + shift) % n],
    # with distinct shifts, then both sides relabeled at random
    if delta > n:
        raise InfeasibleSpec(f"regular bipartite needs delta <= n, got {delta} > {n}")
    shifts = list(range(n))
    rng.shuffle(shifts)
    shifts = shifts[:delta]
    left = list(range(n))
    right = list(range(n))
    rng.shuffle(left)
    rng.shuffle(right)
    edges = []
    for sh in shifts:
        for x in range(n):
            edges.append((left[x], n + right[(x + sh) % n]))
    return edges


def _bipartite_random_edges(n: int, delta: int, rng) -> list[tuple[int, int]]:
    offline_load = [0] * n
    edges = []
    for u in range(n):
        want = rng.randint(1, delta)
        picks = rng.sample(range(n), min(want + delta, n))
        taken = 0
        for j in picks:
            if taken >= want:
                break
            if offline_load[j] < delta:
                offline_load[j] += 1
                edges.append((u, n + j))
                taken += 1
    return edges


def _general_regular_edges(n: int, delta: int, rng) -> list[tuple[int, int]]:
    # circulant construction, then a random relabeling
    if delta >= n:
        raise InfeasibleSpec(f"regular general graph needs delta < n, got {delta} >= {n}")
    if delta % 2 == 1 and n % 2 == 1:
        raise InfeasibleSpec("odd delta needs an even vertex count")
    label = list(range(n))
    rng.shuffle(label)
    edges = []
    for j in range(1, delta // 2 + 1):
        for x in range(n):
            y = (x + j) % n
            if j == n - j and x > y:  # antipodal offset pairs each edge twice
                continue
            edges.append((label[x], label[y]))
    if delta % 2 == 1:
        half = n // 2
        for x in range(half):
            edges.append((label[x], label[x + half]))
    return edges


def build_edges(spec: GenSpec) -> list[tuple[int, int]]:
    """The underlying edge set of a family, before arrival ordering."""
    if spec.delta < 1:
        raise InfeasibleSpec("delta must be at least 1")
    if spec.n < 1:
        raise InfeasibleSpec("n must be at least 1")
    rng = child_rng(spec.seed, 0xED6E)
    if spec.family in ("regular-bipartite", "adversarial-frontload"):
        return _bipartite_regular_edges(spec.n, spec.delta, rng)
    if spec.family == "random-bipartite":
        return _bipartite_random_edges(spec.n, spec.delta, rng)
    if spec.family == "regular-general":
        return _general_regular_edges(spec.n, spec.delta, rng)
    raise InfeasibleSpec(f"unknown family {spec.family!r}")


def generate(spec: GenSpec) -> str:
    """Render a stream file for the spec; deterministic in the seed."""
    if spec.mode not in (MODE_EDGE, MODE_VERTEX_ONE_SIDED, MODE_VERTEX_TWO_SIDED, MODE_BATCH):
        raise InfeasibleSpec(f"unknown mode {spec.mode!r}")
    bipartite = spec.family != "regular-general"
    if not bipartite and spec.mode in (MODE_VERTEX_ONE_SIDED, MODE_BATCH):
        raise InfeasibleSpec(f"{spec.family} cannot be presented {spec.mode}")
    edges = build_edges(spec)
    rng = child_rng(spec.seed, 0x08DE8)
    frontload = spec.family == "adversarial-frontload"
    n_online = spec.n
    n_offline = spec.n if bipartite else 0
    mode = spec.mode
    batch_size = 0

    lines: list[str] = []
    if mode == MODE_EDGE:
        if frontload:
            edges.sort(key=lambda e: (e[1], e[0]))  # offline-major order
        else:
            rng.shuffle(edges)
        lines.extend(f"e {a} {b}" for a, b in edges)
    elif mode == MODE_VERTEX_ONE_SIDED:
        byu: dict[int, list[int]] = {u: [] for u in range(n_online)}
        for a, b in edges:
            byu[a].append(b)
        order = list(range(n_online))
        if frontload:
            for u in order:
                byu[u].sort()
        else:
            rng.shuffle(order)
            for u in order:
                rng.shuffle(byu[u])
        lines.extend(
            f"V {u} " + " ".join(map(str, byu[u])) if byu[u] else f"V {u}" for u in order
        )
    elif mode == MODE_VERTEX_TWO_SIDED:
        total = n_online + n_offline
        order = list(range(total))
        rng.shuffle(order)
        pos = {v: i for i, v in enumerate(order)}
        late: dict[int, list[int]] = {v: [] for v in range(total)}
        for a, b in edges:
            # the later endpoint announces the edge
            if pos[a] > pos[b]:
                late[a].append(b)
            else:
                late[b].append(a)
        for v in order:
            nbrs = late[v]
            if frontload:
                nbrs.sort()
            else:
                rng.shuffle(nbrs)
            lines.append(f"V {v} " + " ".join(map(str, nbrs)) if nbrs else f"V {v}")
    else:  # batch mode
        k = spec.batch_size if spec.batch_size else _ceil_sqrt(spec.delta)
        if spec.family not in ("regular-bipartite", "adversarial-frontload"):
            raise InfeasibleSpec("batch streams need a regular bipartite family")
        if spec.delta % k != 0:
            raise InfeasibleSpec(
                f"batch mode needs batch_size | delta, got {k} and {spec.delta}"
            )
        batch_size = k
        byu = {u: [] for u in range(n_online)}
        for a, b in edges:
            byu[a].append(b)
        units = []
        for u in range(n_online):
            nbrs = byu[u]
            if frontload:
                nbrs.sort()
            else:
                rng.shuffle(nbrs)
            for i in range(0, len(nbrs), k):
                units.append((i // k, u, nbrs[i : i + k]))
        if frontload:
            units.sort(key=lambda t: (t[0], t[1]))  # all first batches first
        else:
            rng.shuffle(units)
        lines.extend(f"B {u} " + " ".join(map(str, chunk)) for _, u, chunk in units)

    header = StreamHeader(n_online, n_offline, spec.delta, mode, batch_size, spec.seed)
    return header.to_line() + "\n" + "\n".join(lines) + ("\n" if lines else "")


def _ceil_sqrt(x: int) -> int:
    k = math.isqrt(x)
    return k if k * k == x else k + 1


# --- verification ---


@dataclass
class VerifyReport:
    proper: bool
    complete: bool
    colors_used: int
    max_color: int
    edges_colored: int
    missing: list[tuple[int, int]] = field(default_factory=list)
    duplicates: list[tuple[int, int]] = field(default_factory=list)
    unknown: list[tuple[int, int]] = field(default_factory=list)
    conflicts: list[tuple[tuple[int, int], tuple[int, int], int]] = field(default_factory=list)
    budget_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.proper and self.complete and self.budget_ok


def collect_edges(events) -> dict[tuple[int, int], int]:
    """Canonical edge set of a stream, rejecting repeats."""
    expected: dict[tuple[int, int], int] = {}
    for ev in events:
        if type(ev) is EdgeArrival:
            pairs = ((ev.u, ev.v),)
        else:
            pairs = tuple((ev.u, v) for v in ev.neighbors)
        for a, b in pairs:
            e = (a, b) if a < b else (b, a)
            if e in expected:
                raise MalformedLine(f"stream repeats edge {e}")
            expected[e] = 0
    return expected


def verify(
    stream_lines: Iterable[str],
    output_lines: Iterable[str],
    budget: int | None = None,
    limit: int = 10,
) -> VerifyReport:
    """Check an output file against its stream file; the whole-run oracle."""
    _header, events = parse_stream(stream_lines)
    expected = collect_edges(events)
    assignments, _trailer = parse_output(output_lines)
    return check_assignments(expected, assignments, budget=budget, limit=limit)


def check_assignments(
    expected: dict[tuple[int, int], int],
    assignments,
    budget: int | None = None,
    limit: int = 10,
) -> VerifyReport:
    """The checking core shared by the file oracle and in-memory runs.

    `expected` is mutated (coverage counts); pass a fresh dict per check.
    """
    at_vertex: dict[int, dict[int, tuple[int, int]]] = {}
    colors: set[int] = set()
    max_color = -1
    duplicates, unknown, conflicts = [], [], []
    for u, v, c in assignments:
        e = (u, v) if u < v else (v, u)
        seen = expected.get(e)
        if seen is None:
            unknown.append(e)
        elif seen:
            duplicates.append(e)
        else:
            expected[e] = 1
        colors.add(c)
        if c > max_color:
            max_color = c
        for x in e:
            holder = at_vertex.setdefault(x, {})
            other = holder.get(c)
            if other is not None and len(conflicts) < limit:
                conflicts.append((other, e, c))
            holder[c] = e

    missing = [e for e, seen in expected.items() if not seen]
    budget_ok = budget is None or max_color + 1 <= budget
    return VerifyReport(
        proper=not conflicts,
        complete=not missing and not duplicates and not unknown,
        colors_used=len(colors),
        max_color=max_color,
        edges_colored=len(assignments),
        missing=missing[:limit],
        duplicates=duplicates[:limit],
        unknown=unknown[:limit],
        conflicts=conflicts,
        budget_ok=budget_ok,
    )


# --- the k-out Monte Carlo experiment ---


@dataclass(frozen=True)
class KoutResult:
    n: int
    u_size: int
    k: int
    trials: int
    seed: int
    failures: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    def wilson(self, z: float = 1.96) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials, z)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval; well behaved for rare events."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def run_kout_experiment(
    n: int,
    c: Fraction | float | str,
    k: int,
    trials: int,
    seed: int,
) -> KoutResult:
    """Empirical failure rate of perfect matching in the random k-out model."""
    frac = Fraction(str(c)) if not isinstance(c, Fraction) else c
    u_size = -(-frac.numerator * n // frac.denominator)  # ceil(c * n)
    failures = 0
    for t in range(trials):
        rng = child_rng(seed, t)
        if not kout_trial(n, u_size, k, rng):
            failures += 1
    return KoutResult(n, u_size, k, trials, seed, failures)


# --- experiment suite ---


@dataclass(frozen=True)
class RunRequest:
    preset: str
    spec: GenSpec
    s: int = 1
    force_stream: bool = False


def execute_run(req: RunRequest) -> dict:
    """Generate, run, and verify one cell; returns one CSV row as a dict.

    Internal bound violations (the designed-for rare events) are recorded
    in the row instead of crashing a whole suite; anything else raises.
    """
    text = generate(req.spec)
    header, events = parse_stream(io.StringIO(text))
    started = time.perf_counter()
    assignments: list[tuple[int, int, int]] = []

    def emit(u: int, v: int, c: int) -> None:
        assignments.append((u, v, c))

    expected: dict[tuple[int, int], int] = {}

    def tee(evs):
        # collect the canonical edge set at parse level while streaming,
        # so verification never trusts the algorithm's own bookkeeping
        for ev in evs:
            if type(ev) is EdgeArrival:
                a, b = ev.u, ev.v
                expected[(a, b) if a < b else (b, a)] = 0
            else:
                u = ev.u
                for v in ev.neighbors:
                    expected[(u, v) if u < v else (v, u)] = 0
            yield ev

    breach = None
    stats = None
    try:
        stats = run_stream(
            header,
            tee(events),
            req.preset,
            s=req.s,
            force_stream=req.force_stream,
            emit=emit,
        )
    except (BoundViolation, FlushBudgetExceeded) as exc:
        breach = str(exc)
    millis = int((time.perf_counter() - started) * 1000)
    report = None
    if breach is None:
        report = check_assignments(expected, assignments)
    return {
        "preset": req.preset,
        "family": req.spec.family,
        "n": req.spec.n,
        "delta": req.spec.delta,
        "s": stats.s if stats else req.s,
        "seed": req.spec.seed,
        "proper": bool(report and report.ok),
        "colors_used": stats.colors_used if stats else 0,
        "budget": stats.declared_budget if stats else 0,
        "peak_words": stats.peak_words if stats else 0,
        "spilled_vertices": stats.spilled_vertices if stats else 0,
        "spilled_edges": stats.spilled_edges if stats else 0,
        "millis": millis,
        "breach": breach,
        "_stats": stats,
        "_report": report,
    }


def row_to_csv(row: dict) -> str:
    return (
        f"{row['preset']},{row['family']},{row['n']},{row['delta']},{row['s']},"
        f"{row['seed']},{'true' if row['proper'] else 'false'},{row['colors_used']},"
        f"{row['budget']},{row['peak_words']},{row['spilled_vertices']},"
        f"{row['spilled_edges']},{row['millis']}"
    )


def run_experiment_suite(requests: list[RunRequest], jobs: int = 1) -> list[dict]:
    """Run every request, optionally on a process pool; order preserved."""
    if jobs > 1 and len(requests) > 1:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            return pool.map(execute_run, requests, chunksize=1)
    return [execute_run(r) for r in requests]
