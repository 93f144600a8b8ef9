"""Shifted color proposals and flat encodings of composite palettes.

Each offline vertex stores three distinct random shifts in [0, P) plus a
running degree counter, where the period P = ceil(2.72 * delta). Its i-th
edge is offered three colors, one per band: (shift + degree) mod P, offset
by 0, P, or 2P. Two properties make this sound. The bands tile disjoint
ranges, so colors from different bands never collide. And within a band,
two edges of the same offline vertex see different degree values whose gap
is at most delta < P, so their proposals differ mod P.

The stretch factor 2.72 is kept as the exact rational 272/100 and P is
computed with integer arithmetic only, so runs are bit-for-bit reproducible
across platforms.

Layered algorithms give each internal colorer its own contiguous block of
the final color space. `FlatPalette` maps composite colors (for example
batch index plus base color) to dense integers via mixed-radix encoding,
and `ColorAllocator` hands out disjoint blocks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ComponentOutOfRange, PeriodTooSmall

C_NUM = 272
C_DEN = 100


def period_for(delta: int) -> int:
    """P = ceil(2.72 * delta), in exact integer arithmetic."""
    return (C_NUM * delta + C_DEN - 1) // C_DEN


@dataclass(frozen=True)
class PaletteParams:
    delta: int
    period: int

    @classmethod
    def for_delta(cls, delta: int) -> "PaletteParams":
        if delta < 1:
            raise ValueError("delta must be at least 1")
        return cls(delta=delta, period=period_for(delta))


class OfflineState:
    """Per-offline-vertex state: three distinct shifts and a degree counter."""

    __slots__ = ("r1", "r2", "r3", "deg")

    WORDS = 4  # three shifts plus one counter

    def __init__(self, r1: int, r2: int, r3: int, deg: int = 0):
        self.r1 = r1
        self.r2 = r2
        self.r3 = r3
        self.deg = deg

    def shifts(self) -> tuple[int, int, int]:
        return (self.r1, self.r2, self.r3)

    def __repr__(self) -> str:
        return f"OfflineState(r1={self.r1}, r2={self.r2}, r3={self.r3}, deg={self.deg})"


def draw_offline_state(rng: random.Random, params: PaletteParams) -> OfflineState:
    """Draw three distinct uniform shifts from [0, P), ordered as drawn."""
    p = params.period
    if p < 3:
        raise PeriodTooSmall(f"period {p} cannot host three distinct shifts")
    r1 = rng.randrange(p)
    r2 = rng.randrange(p)
    while r2 == r1:
        r2 = rng.randrange(p)
    r3 = rng.randrange(p)
    while r3 == r1 or r3 == r2:
        r3 = rng.randrange(p)
    return OfflineState(r1, r2, r3)


def propose_colors(state: OfflineState, params: PaletteParams) -> tuple[int, int, int]:
    """The three banded colors offered to this vertex's next edge.

    Pure: the caller increments `deg` exactly once per consumed edge,
    which lets batch layers interleave proposals for several edges.
    """
    p = params.period
    d = state.deg
    return (
        (state.r1 + d) % p,
        (state.r2 + d) % p + p,
        (state.r3 + d) % p + 2 * p,
    )


def propose_bases(state: OfflineState, params: PaletteParams) -> tuple[int, int, int]:
    """The same three proposals reduced mod P (band offsets dropped)."""
    p = params.period
    d = state.deg
    return ((state.r1 + d) % p, (state.r2 + d) % p, (state.r3 + d) % p)


class FlatPalette:
    """Mixed-radix encoding of composite colors onto [0, total).

    The layout lists (label, width) pairs, most significant first; the
    component ranges tile the flat range exactly.
    """

    __slots__ = ("layout", "total", "_strides")

    def __init__(self, layout: list[tuple[str, int]]):
        if not layout or any(w < 1 for _, w in layout):
            raise ValueError("layout needs positive widths")
        self.layout = list(layout)
        strides = [1] * len(layout)
        for i in range(len(layout) - 2, -1, -1):
            strides[i] = strides[i + 1] * layout[i + 1][1]
        self._strides = strides
        self.total = strides[0] * layout[0][1]

    def flatten(self, components: tuple[int, ...]) -> int:
        if len(components) != len(self.layout):
            raise ComponentOutOfRange("component count does not match layout")
        flat = 0
        for value, (label, width), stride in zip(components, self.layout, self._strides):
            if not 0 <= value < width:
                raise ComponentOutOfRange(f"{label}={value} outside [0, {width})")
            flat += value * stride
        return flat

    def unflatten(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.total:
            raise ComponentOutOfRange(f"flat id {flat} outside [0, {self.total})")
        out = []
        for stride in self._strides:
            out.append(flat // stride)
            flat %= stride
        return tuple(out)


class ColorAllocator:
    """Hands out disjoint contiguous blocks of the final color space.

    Static blocks are reserved when a run is wired up; dynamic blocks
    (buffer flushes, spill sets, leftovers) are grabbed as needed. The
    high-water mark is the run's true palette footprint.
    """

    __slots__ = ("next_free", "blocks")

    def __init__(self) -> None:
        self.next_free = 0
        self.blocks: list[tuple[str, int, int]] = []

    def reserve(self, width: int, label: str = "") -> int:
        if width < 0:
            raise ValueError("block width must be non-negative")
        base = self.next_free
        self.next_free += width
        self.blocks.append((label, base, width))
        return base

    @property
    def total(self) -> int:
        return self.next_free
