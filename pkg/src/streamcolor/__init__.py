"""streamcolor: single-pass streaming edge coloring with streamed output.

A library and CLI for coloring the edges of a graph in one pass over an
arrival stream, emitting colors as it reads, under four arrival models
(edge, one-sided vertex, two-sided vertex, batch). The core machinery
trades a constant-factor color surplus for tiny memory: randomly shifted
color proposals per offline vertex, perfect matchings of arrivals onto
proposals, random shift decompositions for edge arrivals, and recursive
random bipartization for general graphs. A word-exact space meter and an
independent output verifier make the guarantees checkable per run.
"""

from .core import OneSidedColorer, SpillReport
from .errors import StreamColorError
from .harness import GenSpec, KoutResult, RunRequest, VerifyReport, generate, run_kout_experiment, verify
from .matching import ColorGraph, brute_force_match, kout_trial, perfect_match
from .meter import SpaceMeter
from .offline import OfflineGraph, color_bipartite_exact, color_general, color_greedy
from .palette import (
    ColorAllocator,
    FlatPalette,
    OfflineState,
    PaletteParams,
    draw_offline_state,
    propose_colors,
)
from .presets import PRESETS, RunStats, declared_budget, run_stream
from .stream import (
    AssignmentWriter,
    BatchArrival,
    ColorAssignment,
    EdgeArrival,
    StreamHeader,
    VertexArrival,
    parse_output,
    parse_stream,
    serialize_stream,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentWriter",
    "BatchArrival",
    "ColorAllocator",
    "ColorAssignment",
    "ColorGraph",
    "EdgeArrival",
    "FlatPalette",
    "GenSpec",
    "KoutResult",
    "OfflineGraph",
    "OfflineState",
    "OneSidedColorer",
    "PRESETS",
    "PaletteParams",
    "RunRequest",
    "RunStats",
    "SpaceMeter",
    "SpillReport",
    "StreamColorError",
    "StreamHeader",
    "VertexArrival",
    "VerifyReport",
    "brute_force_match",
    "color_bipartite_exact",
    "color_general",
    "color_greedy",
    "declared_budget",
    "draw_offline_state",
    "generate",
    "kout_trial",
    "parse_output",
    "parse_stream",
    "perfect_match",
    "propose_colors",
    "run_kout_experiment",
    "run_stream",
    "serialize_stream",
    "verify",
]
