"""Simulated BIS/IS graph oracles with exact query accounting, and edge estimators built on them."""

from .bis_estimator import (
    BisParams,
    CoarseEstimate,
    EstimatorState,
    WeightedPair,
    bis_estimate_degree,
    bis_estimate_edges,
    check_estimate,
    coarse_estimator,
)
from .edgelist import parse_edge_list, read_edge_list, write_edge_list
from .errors import (
    BudgetExceeded,
    ConfigError,
    EdgeOracleError,
    IngestError,
    InvalidGeneratorParams,
    InvalidParams,
    InvalidPartCount,
    InvalidVertex,
    NotIndependent,
    SelfLoop,
    SetsNotDisjoint,
    VertexInQuerySet,
)
from .exact import (
    bis_adjacent_edges,
    bis_component_edges,
    bis_exact_all,
    bis_exact_between,
    is_decompose_independent,
    is_exact_bipartite,
    is_exact_within,
)
from .generators import generate
from .graph import Graph, Partition, VertexSet, build_graph, random_partition, true_edges_between, true_edges_within
from .is_estimator import IsParams, is_estimate_edges, is_growing_step, is_shrinking_step, is_small_count
from .kernels import BACKEND
from .oracles import (
    OracleSession,
    QueryLedger,
    bis_query,
    edge_existence_via_is,
    is_query,
    neighborhood_emptiness_via_bis,
)
from .outcomes import AtLeast, AtMost, Below, Estimate, Exact, MoreThan
from .primitives import (
    SparsifyResult,
    WeightedItem,
    emptiness_size_estimate,
    importance_reduce,
    membership_size_estimate,
    membership_size_test,
    sparsify_matched_pairs,
)
from .report import EstimateReport

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
