"""braidforge: closed braids, arc presentations and move recognition."""

from .braid import BraidWord, format_word, parse_word
from .grid import ArcPresentation, ShearingConfig
from .recognize import (
    SearchBudget,
    Verdict,
    recognize_destabilization,
    recognize_double_destabilization,
    recognize_elementary_flype,
    recognize_thin_exchange,
    related_by_move,
    replay_certificate,
)
from .transit import braid_to_grid, grid_to_braid

__version__ = "0.1.0"

__all__ = [
    "ArcPresentation", "BraidWord", "SearchBudget", "ShearingConfig", "Verdict",
    "braid_to_grid", "format_word", "grid_to_braid", "parse_word",
    "recognize_destabilization", "recognize_double_destabilization",
    "recognize_elementary_flype", "recognize_thin_exchange", "related_by_move",
    "replay_certificate",
]
