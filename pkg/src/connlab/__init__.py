"""Min-based graph connectivity on shared-memory CPUs.

Two-phase static connectivity, spanning forest, and batch-incremental
connectivity, composed from interchangeable sampling strategies (k-out,
hook-based, BFS), union rules (async, hooks, early, two Rem variants,
randomized-rank), path compaction rules (naive/split/halve/compress), and
splices — plus round-synchronous label-propagation finishes
(Shiloach-Vishkin, the sixteen LT variants, Stergiou, plain label
propagation), oracle-backed validation, and a benchmark harness.
"""

from .driver import (
    AlgorithmSpec,
    FinishKind,
    ForestEdges,
    Insert,
    Query,
    SampleKind,
    enumerate_specs,
    finish_phase,
    format_spec,
    incremental,
    label_finalization,
    parse_spec,
    spanning_forest,
    static_connectivity,
)
from .dset import DisjointSets, FindOp, SpliceOp, UnionConfig, UnionOp
from .errors import ConfigError, MalformedInputError, VerificationError
from .graphs import EdgeList, Graph, build_csr, gen_ba, gen_rmat, load_graph
from .minbased import LT_VARIANTS, LTVariant
from .sampling import KOutMode
from .validate import (
    RunStats,
    check_forest,
    oracle_components,
    oracle_components_unionfind,
    partition_equal,
    sampling_stats,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSpec",
    "ConfigError",
    "DisjointSets",
    "EdgeList",
    "FindOp",
    "FinishKind",
    "ForestEdges",
    "Graph",
    "Insert",
    "KOutMode",
    "LTVariant",
    "LT_VARIANTS",
    "MalformedInputError",
    "Query",
    "RunStats",
    "SampleKind",
    "SpliceOp",
    "UnionConfig",
    "UnionOp",
    "VerificationError",
    "build_csr",
    "check_forest",
    "enumerate_specs",
    "finish_phase",
    "format_spec",
    "gen_ba",
    "gen_rmat",
    "incremental",
    "label_finalization",
    "load_graph",
    "oracle_components",
    "oracle_components_unionfind",
    "parse_spec",
    "partition_equal",
    "sampling_stats",
    "spanning_forest",
    "static_connectivity",
]
