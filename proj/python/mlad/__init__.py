"""Multi-scale anomaly detection on labelled graph sequences."""

from ._mlad import (
    InvalidArgument,
    ParseError,
    Pipeline,
    Sequence,
    evaluate,
    experiment,
    fit,
    graph_log_prob,
    load_sequence,
    node_log_probs,
    run_stream,
    sample,
)

__all__ = [
    "InvalidArgument",
    "ParseError",
    "Pipeline",
    "Sequence",
    "evaluate",
    "experiment",
    "fit",
    "graph_log_prob",
    "load_sequence",
    "node_log_probs",
    "run_stream",
    "sample",
]
