"""Graph-stream data model and the on-disk text formats.

A stream is UTF-8 text, one record per line:

    H <n_online> <n_offline> <delta> <mode> <batch_size> <seed>
    e <u> <v>                edge arrival
    V <u> <v1> ... <vd>      vertex arrival with all its edges
    B <u> <v1> ... <vk>      one batch of exactly k edges of u

The header comes first and is mandatory. `mode` is one of `edge`,
`vertex-one-sided`, `vertex-two-sided`, `batch`; it decides which event
kinds are legal in the body. `batch_size` is 0 except in batch mode.
Vertex ids are dense and 0-based; in bipartite streams the online side is
[0, n_online) and the offline side is [n_online, n_online + n_offline).
For general graphs n_offline is 0 and every vertex shares one id space.

Output files carry one `c <u> <v> <color>` line per colored edge, in
emission order, then a trailer `T <colors_used> <peak_words>`.

The parser is single pass and lazy: it yields events in file order and
validates syntax, event-kind legality, self-loops, duplicate neighbors
within one arrival, and the declared degree bound (detected at the exact
violating event via per-vertex counters). Side-range semantics are left
to the algorithm layer so that parsing stays a pure syntax concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, TextIO

from .errors import (
    DegreeExceeded,
    DuplicateEdge,
    IoFailure,
    MalformedLine,
    ModeMismatch,
    SelfLoop,
)

MODE_EDGE = "edge"
MODE_VERTEX_ONE_SIDED = "vertex-one-sided"
MODE_VERTEX_TWO_SIDED = "vertex-two-sided"
MODE_BATCH = "batch"

MODES = (MODE_EDGE, MODE_VERTEX_ONE_SIDED, MODE_VERTEX_TWO_SIDED, MODE_BATCH)


class EdgeArrival(NamedTuple):
    u: int
    v: int


class VertexArrival(NamedTuple):
    u: int
    neighbors: tuple[int, ...]


class BatchArrival(NamedTuple):
    u: int
    neighbors: tuple[int, ...]


StreamEvent = EdgeArrival | VertexArrival | BatchArrival


class ColorAssignment(NamedTuple):
    u: int
    v: int
    color: int


@dataclass(frozen=True)
class StreamHeader:
    n_online: int
    n_offline: int
    delta: int
    mode: str
    batch_size: int
    seed: int

    @property
    def n_total(self) -> int:
        return self.n_online + self.n_offline

    @property
    def bipartite(self) -> bool:
        return self.n_offline > 0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise MalformedLine(f"unknown mode {self.mode!r}")
        if self.n_online < 0 or self.n_offline < 0:
            raise MalformedLine("vertex counts must be non-negative")
        if self.delta < 1:
            raise MalformedLine("delta must be at least 1")
        if self.mode == MODE_BATCH:
            if self.batch_size < 1:
                raise MalformedLine("batch mode needs batch_size >= 1")
            if self.batch_size > self.delta:
                raise MalformedLine("batch_size cannot exceed delta")
        elif self.batch_size != 0:
            raise MalformedLine("batch_size must be 0 outside batch mode")
        if self.mode in (MODE_VERTEX_ONE_SIDED, MODE_BATCH) and self.n_offline == 0:
            raise MalformedLine(f"{self.mode} streams are bipartite; n_offline must be positive")

    def to_line(self) -> str:
        return (
            f"H {self.n_online} {self.n_offline} {self.delta} "
            f"{self.mode} {self.batch_size} {self.seed}"
        )


def parse_header(line: str) -> StreamHeader:
    parts = line.split()
    if len(parts) != 7 or parts[0] != "H":
        raise MalformedLine(f"bad header line: {line!r}")
    try:
        n_online, n_offline, delta = int(parts[1]), int(parts[2]), int(parts[3])
        batch_size, seed = int(parts[5]), int(parts[6])
    except ValueError as exc:
        raise MalformedLine(f"non-integer field in header: {line!r}") from exc
    header = StreamHeader(n_online, n_offline, delta, parts[4], batch_size, seed)
    header.validate()
    return header


def parse_stream(lines: Iterable[str]) -> tuple[StreamHeader, Iterator[StreamEvent]]:
    """Read the header eagerly, then yield validated events lazily.

    `lines` may be an open file, a list, or any iterable of text lines.
    Degree violations raise at the exact event that crosses the bound.
    """
    it = iter(lines)
    header = None
    for raw in it:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = parse_header(line)
        break
    if header is None:
        raise MalformedLine("empty stream: no header line")
    return header, _events(header, it)


def _events(header: StreamHeader, it: Iterator[str]) -> Iterator[StreamEvent]:
    delta = header.delta
    mode = header.mode
    degrees: dict[int, int] = {}
    lineno = 1

    for raw in it:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]

        if kind == "e":
            if mode != MODE_EDGE:
                raise ModeMismatch(f"line {lineno}: edge event in {mode} stream")
            if len(parts) != 3:
                raise MalformedLine(f"line {lineno}: edge needs exactly two endpoints")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise MalformedLine(f"line {lineno}: non-integer endpoint") from exc
            if u < 0 or v < 0:
                raise MalformedLine(f"line {lineno}: negative vertex id")
            if u == v:
                raise SelfLoop(f"line {lineno}: self-loop at vertex {u}")
            du = degrees.get(u, 0) + 1
            dv = degrees.get(v, 0) + 1
            if du > delta or dv > delta:
                who = u if du > delta else v
                raise DegreeExceeded(f"line {lineno}: vertex {who} passes delta={delta}")
            degrees[u] = du
            degrees[v] = dv
            yield EdgeArrival(u, v)

        elif kind == "V":
            if mode not in (MODE_VERTEX_ONE_SIDED, MODE_VERTEX_TWO_SIDED):
                raise ModeMismatch(f"line {lineno}: vertex event in {mode} stream")
            yield _arrival(parts, lineno, delta, degrees, VertexArrival)

        elif kind == "B":
            if mode != MODE_BATCH:
                raise ModeMismatch(f"line {lineno}: batch event in {mode} stream")
            if len(parts) - 2 != header.batch_size:
                raise MalformedLine(
                    f"line {lineno}: batch has {len(parts) - 2} edges, "
                    f"declared batch_size is {header.batch_size}"
                )
            yield _arrival(parts, lineno, delta, degrees, BatchArrival)

        elif kind == "H":
            raise MalformedLine(f"line {lineno}: second header line")
        else:
            raise MalformedLine(f"line {lineno}: unknown record {kind!r}")


def _arrival(parts, lineno, delta, degrees, cls):
    try:
        u = int(parts[1])
        neighbors = tuple(int(p) for p in parts[2:])
    except (ValueError, IndexError) as exc:
        raise MalformedLine(f"line {lineno}: bad vertex arrival") from exc
    if u < 0 or any(v < 0 for v in neighbors):
        raise MalformedLine(f"line {lineno}: negative vertex id")
    if any(v == u for v in neighbors):
        raise SelfLoop(f"line {lineno}: self-loop at vertex {u}")
    if len(set(neighbors)) != len(neighbors):
        raise DuplicateEdge(f"line {lineno}: repeated neighbor in one arrival")
    du = degrees.get(u, 0) + len(neighbors)
    if du > delta:
        raise DegreeExceeded(f"line {lineno}: vertex {u} passes delta={delta}")
    degrees[u] = du
    for v in neighbors:
        dv = degrees.get(v, 0) + 1
        if dv > delta:
            raise DegreeExceeded(f"line {lineno}: vertex {v} passes delta={delta}")
        degrees[v] = dv
    return cls(u, neighbors)


def event_to_line(event: StreamEvent) -> str:
    if type(event) is EdgeArrival:
        return f"e {event.u} {event.v}"
    tag = "V" if type(event) is VertexArrival else "B"
    if event.neighbors:
        return f"{tag} {event.u} " + " ".join(map(str, event.neighbors))
    return f"{tag} {event.u}"


def serialize_stream(header: StreamHeader, events: Iterable[StreamEvent]) -> str:
    lines = [header.to_line()]
    lines.extend(event_to_line(ev) for ev in events)
    return "\n".join(lines) + "\n"


def emit_assignment(sink: TextIO, u: int, v: int, color: int) -> None:
    """Write one output record; the sink should be line buffered."""
    try:
        sink.write(f"c {u} {v} {color}\n")
    except ValueError as exc:
        raise IoFailure("output sink is closed") from exc


class AssignmentWriter:
    """Streams `c` lines to a sink and tracks the set of colors used."""

    __slots__ = ("sink", "colors", "count")

    def __init__(self, sink: TextIO):
        self.sink = sink
        self.colors: set[int] = set()
        self.count = 0

    def emit(self, u: int, v: int, color: int) -> None:
        self.colors.add(color)
        self.count += 1
        emit_assignment(self.sink, u, v, color)

    @property
    def colors_used(self) -> int:
        return len(self.colors)

    def trailer(self, peak_words: int) -> None:
        try:
            self.sink.write(f"T {self.colors_used} {peak_words}\n")
        except ValueError as exc:
            raise IoFailure("output sink is closed") from exc


def parse_output(lines: Iterable[str]) -> tuple[list[ColorAssignment], tuple[int, int] | None]:
    """Read an output file: the assignments plus the trailer, if present."""
    assignments: list[ColorAssignment] = []
    trailer: tuple[int, int] | None = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "c":
            if len(parts) != 4:
                raise MalformedLine(f"output line {lineno}: bad assignment record")
            try:
                assignments.append(ColorAssignment(int(parts[1]), int(parts[2]), int(parts[3])))
            except ValueError as exc:
                raise MalformedLine(f"output line {lineno}: non-integer field") from exc
            if assignments[-1].color < 0:
                raise MalformedLine(f"output line {lineno}: negative color")
        elif parts[0] == "T":
            if len(parts) != 3:
                raise MalformedLine(f"output line {lineno}: bad trailer")
            trailer = (int(parts[1]), int(parts[2]))
        else:
            raise MalformedLine(f"output line {lineno}: unknown record {parts[0]!r}")
    return assignments, trailer
