"""Temporal-graph resolution suggestion and colored-barcode exploration."""

from .graph import TemporalGraph, load_graph, parse_edges, parse_labels, truncate
from .slicing import SnapshotSequence, partition_slices, sliding_slices, timeslice

__version__ = "0.1.0"

__all__ = [
    "TemporalGraph",
    "SnapshotSequence",
    "load_graph",
    "parse_edges",
    "parse_labels",
    "partition_slices",
    "sliding_slices",
    "timeslice",
    "truncate",
]
