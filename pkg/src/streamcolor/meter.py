"""Word-count space accounting for algorithm-owned state.

One word is one stored integer: a random shift, a degree or batch counter,
a buffered or spilled edge endpoint, a packed bit vector, or a cell of
transient per-arrival scratch. Memory owned by the harness (generators,
the verifier, file buffers) is never charged here; the point is to measure
the algorithm exactly as its space guarantees are stated.
"""

from __future__ import annotations


class SpaceMeter:
    """Running word ledger with a per-module breakdown and peak tracking."""

    __slots__ = ("current_words", "peak_words", "ledger")

    def __init__(self) -> None:
        self.current_words = 0
        self.peak_words = 0
        self.ledger: dict[str, int] = {}

    def add(self, key: str, words: int) -> None:
        if words == 0:
            return
        self.ledger[key] = self.ledger.get(key, 0) + words
        cur = self.current_words + words
        self.current_words = cur
        if cur > self.peak_words:
            self.peak_words = cur

    def release(self, key: str, words: int) -> None:
        if words == 0:
            return
        left = self.ledger.get(key, 0) - words
        if left < 0:
            raise ValueError(f"meter underflow for {key!r}: released below zero")
        self.ledger[key] = left
        self.current_words -= words

    def consistent(self) -> bool:
        """The ledger always sums to the live word count."""
        return sum(self.ledger.values()) == self.current_words and self.current_words >= 0
