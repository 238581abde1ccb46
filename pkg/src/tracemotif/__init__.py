"""Mining and diagnosis of recurring processing patterns in trace DAGs."""

__version__ = "0.1.0"

from .errors import TraceMotifError
from .model import LabelTable, Trace, TraceEdge, TracePoint, TraceStore, encode_edge_label
from .patterns import Pattern, canonicalize

__all__ = [
    "LabelTable",
    "Pattern",
    "Trace",
    "TraceEdge",
    "TracePoint",
    "TraceStore",
    "TraceMotifError",
    "canonicalize",
    "encode_edge_label",
    "__version__",
]
