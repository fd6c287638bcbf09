"""Powers of tight Hamilton cycles in randomly perturbed hypergraphs."""

from .errors import (
    AbsorberShortfall,
    EmbeddingIncomplete,
    ExtensionFailed,
    InvalidArgument,
    NoAbsorber,
    NoEdges,
    ParseError,
    TooLarge,
    UnsupportedStructure,
)
from .hypergraph import Hypergraph, load, dump, read_text, write_text, min_codegree
from .powers import PowerParams, g, power_path_edges, power_cycle_edges, is_power_path, is_power_cycle

__version__ = "0.1.0"

__all__ = [
    "AbsorberShortfall", "EmbeddingIncomplete", "ExtensionFailed", "InvalidArgument", "NoAbsorber",
    "NoEdges", "ParseError", "TooLarge", "UnsupportedStructure",
    "Hypergraph", "load", "dump", "read_text", "write_text", "min_codegree",
    "PowerParams", "g", "power_path_edges", "power_cycle_edges", "is_power_path", "is_power_cycle",
]
