"""Multiscale community detection on weighted graphs via spectral max-sum
vector partitioning.

The pipeline: decompose the random-walk transition matrix (or the modularity
matrix), embed the nodes as time-dependent spectral vectors, and optimise
Markov stability, its linearised variant, or modularity as a max-sum vector
partitioning problem with a Louvain-style heuristic.
"""

from .errors import (
    AsymmetricEdgeList,
    ConflictingDuplicateEdge,
    DimOutOfRange,
    Disconnected,
    EigensolverFailure,
    GenerationFailed,
    LevelCapExceeded,
    MalformedLine,
    MissingCommunityLabel,
    ModeBasisMismatch,
    NonEuclideanEmbedding,
    NonPositiveWeight,
    SameGroup,
    SelfLoop,
    SizeMismatch,
    TooLarge,
    VecpartError,
    ZeroDegree,
)
from .graph import Graph, GroundTruth, load_edge_list, load_lfr, planted_partition
from .harness import (
    ComparisonRow,
    DimSweepRow,
    ScanRecord,
    best_of_restarts,
    dim_sweep,
    embedding_comparison,
    geometric_grid,
    time_scan,
)
from .metrics import (
    Contingency,
    nmi,
    sankey_links,
    sankey_to_json,
    uncertainty_coefficient,
    variation_of_information,
)
from .objective import (
    Partition,
    autocovariance_direct,
    group_sum_vectors,
    kmeans_objective,
    linearised_stability,
    modularity_score,
    signed_inner,
    stability,
)
from .spectral import (
    Embedding,
    SpectralBasis,
    build_embedding,
    decompose_modularity_matrix,
    decompose_transition,
    load_basis,
    save_basis,
    scaled_eigenvalues,
)
from .vp import (
    VPConfig,
    VPDiagnostics,
    VPState,
    exhaustive_partition,
    move_gain,
    partition_vectors,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricEdgeList",
    "ConflictingDuplicateEdge",
    "Contingency",
    "ComparisonRow",
    "DimOutOfRange",
    "DimSweepRow",
    "Disconnected",
    "EigensolverFailure",
    "Embedding",
    "GenerationFailed",
    "Graph",
    "GroundTruth",
    "LevelCapExceeded",
    "MalformedLine",
    "MissingCommunityLabel",
    "ModeBasisMismatch",
    "NonEuclideanEmbedding",
    "NonPositiveWeight",
    "Partition",
    "SameGroup",
    "ScanRecord",
    "SelfLoop",
    "SizeMismatch",
    "SpectralBasis",
    "TooLarge",
    "VPConfig",
    "VPDiagnostics",
    "VPState",
    "VecpartError",
    "ZeroDegree",
    "autocovariance_direct",
    "best_of_restarts",
    "build_embedding",
    "decompose_modularity_matrix",
    "decompose_transition",
    "dim_sweep",
    "embedding_comparison",
    "exhaustive_partition",
    "geometric_grid",
    "group_sum_vectors",
    "kmeans_objective",
    "linearised_stability",
    "load_basis",
    "load_edge_list",
    "load_lfr",
    "modularity_score",
    "move_gain",
    "nmi",
    "partition_vectors",
    "planted_partition",
    "sankey_links",
    "sankey_to_json",
    "save_basis",
    "scaled_eigenvalues",
    "signed_inner",
    "stability",
    "time_scan",
    "uncertainty_coefficient",
    "variation_of_information",
]
