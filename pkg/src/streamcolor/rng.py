"""Deterministic seed derivation.

Every run derives all of its randomness from the single 64-bit seed in the
stream header. Components (colorer instances, dispatchers, level routers,
Monte Carlo trials) get independent generators through `split_seed`, a
splitmix64 round over (master, index). The same master seed therefore
reproduces every draw bit for bit, regardless of how work is scheduled.
"""

from __future__ import annotations

import random

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def split_seed(master: int, index: int) -> int:
    """Derive an independent 64-bit child seed from (master, index)."""
    return splitmix64((master & _MASK) ^ splitmix64(index & _MASK))


def child_rng(master: int, index: int) -> random.Random:
    """A fresh generator seeded from `split_seed(master, index)`."""
    return random.Random(split_seed(master, index))
