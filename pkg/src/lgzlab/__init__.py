"""Desk-scale clique complexes, combinatorial Laplacians, and emulated
quantum spectral sampling, validated against exact linear-algebra oracles."""

from .complexes import (
    CliqueSamplingCost,
    CliqueSet,
    Graph,
    PointCloud,
    build_epsilon_graph,
    clique_density,
    enumerate_cliques,
    grover_cost_model,
    load_edge_list,
    load_point_cloud,
    sample_clique_rejection,
    save_edge_list,
)
from .emulator import (
    EigenSample,
    NoiseModel,
    amplification_cost,
    emulated_outcome_distribution,
    lgz_run,
    qpe_outcome_distribution,
    sues_sample,
    sues_samples,
    swes_sample,
    swes_samples,
    tv_distance,
    write_samples_csv,
)
from .errors import InfeasibleError, LgzlabError, ValidationError
from .estimates import (
    EntropyReport,
    SpectralEstimate,
    hoeffding_epsilon,
    hoeffding_sample_count,
)
from .estimators import (
    abne_estimate,
    eigencount_exact,
    eigencount_stochastic,
    llsd_estimate,
    numerical_rank,
    renyi_entropy,
    spectral_entropy,
    subtrace_estimate,
)
from .homology import (
    BettiReport,
    BoundaryMatrix,
    bareiss_rank,
    betti_exact,
    boundary_matrix,
    combinatorial_laplacian,
    dirac_operator,
    hodge_nullity,
    pad_laplacian,
    subset_rank,
)
from .operators import (
    DENSE_CEILING,
    SparseHermitian,
    SpectralExtrema,
    export_dense_csv,
    gershgorin_bound,
    spectral_extrema,
)
from .oracles import (
    LocalTerm,
    LocalTermOracle,
    LocalTermSum,
    LocationResult,
    TripleListStore,
    from_local_terms,
    load_triple_list,
    save_triple_list,
)
from .pipeline import (
    BarcodeProfile,
    ResourceReport,
    RunConfig,
    barcode_profile,
    benchmark,
    named_graph,
    random_graph,
    resource_estimate,
    t_for_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "BarcodeProfile",
    "BettiReport",
    "BoundaryMatrix",
    "CliqueSamplingCost",
    "CliqueSet",
    "DENSE_CEILING",
    "EigenSample",
    "EntropyReport",
    "Graph",
    "InfeasibleError",
    "LgzlabError",
    "LocalTerm",
    "LocalTermOracle",
    "LocalTermSum",
    "LocationResult",
    "NoiseModel",
    "PointCloud",
    "ResourceReport",
    "RunConfig",
    "SparseHermitian",
    "SpectralEstimate",
    "SpectralExtrema",
    "TripleListStore",
    "ValidationError",
    "abne_estimate",
    "amplification_cost",
    "bareiss_rank",
    "barcode_profile",
    "benchmark",
    "betti_exact",
    "boundary_matrix",
    "build_epsilon_graph",
    "clique_density",
    "combinatorial_laplacian",
    "dirac_operator",
    "eigencount_exact",
    "eigencount_stochastic",
    "emulated_outcome_distribution",
    "enumerate_cliques",
    "export_dense_csv",
    "from_local_terms",
    "gershgorin_bound",
    "grover_cost_model",
    "hodge_nullity",
    "hoeffding_epsilon",
    "hoeffding_sample_count",
    "lgz_run",
    "llsd_estimate",
    "load_edge_list",
    "load_point_cloud",
    "load_triple_list",
    "named_graph",
    "numerical_rank",
    "pad_laplacian",
    "qpe_outcome_distribution",
    "random_graph",
    "renyi_entropy",
    "resource_estimate",
    "sample_clique_rejection",
    "save_edge_list",
    "save_triple_list",
    "spectral_entropy",
    "spectral_extrema",
    "subset_rank",
    "subtrace_estimate",
    "sues_sample",
    "sues_samples",
    "swes_sample",
    "swes_samples",
    "t_for_threshold",
    "tv_distance",
    "write_samples_csv",
]
