"""Weighted two-colour extremal problems for eye-free igraphs."""

__version__ = "0.1.0"

from .igraph import (  # noqa: E402
    BLUE,
    GREEN,
    RED,
    WHITE,
    DegreeVector,
    Graph,
    IGraph,
    PairColor,
    color_swap,
    degrees,
    entropy_weight,
    min_p_degree,
    weight,
)
from .kernels import BACKEND  # noqa: E402
from .pattern import Pattern, contains, count_copies, eye, greedy_whiten  # noqa: E402
from .typegraph import TypeGraph  # noqa: E402

__all__ = [
    "BACKEND", "BLUE", "GREEN", "RED", "WHITE", "DegreeVector", "Graph", "IGraph", "PairColor",
    "Pattern", "TypeGraph", "color_swap", "contains", "count_copies", "degrees", "entropy_weight",
    "eye", "greedy_whiten", "min_p_degree", "weight",
]
