"""Graph-based meaning representations: model, I/O, search, scoring, server."""

from .graph import (Batch, Concept, Graph, GraphError, MissingIdError,
                    Relation, StructureError, TokenRangeError, Violation)

__version__ = "0.1.0"

__all__ = [
    "Batch", "Concept", "Graph", "GraphError", "MissingIdError",
    "Relation", "StructureError", "TokenRangeError", "Violation",
    "__version__",
]
