"""robsurf: network robustness surfaces.

Simulates progressive node/link failures on an undirected simple graph,
tracks a vector of robustness metrics at every failure level, derives a
single principal-component weighting across all levels, and assembles the
resulting robustness scalars into a sortable surface with summary curves
and heatmap export.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DegenerateDataError,
    DomainError,
    InputError,
    NumericalError,
    ParseError,
    RobsurfError,
    UndefinedMetricError,
)
from .graph import (
    UNREACHABLE,
    ComponentPartition,
    Graph,
    bfs_distances,
    canonical_link,
    connected_components,
    induced_subgraph,
    laplacian_matrix,
    laplacian_second_eigenvalue,
    remove_links,
    remove_nodes,
)
from .metrics import (
    LINK_METRIC_NAMES,
    NODE_METRIC_NAMES,
    CharacterizationStats,
    MetricVector,
    algebraic_connectivity,
    assortativity,
    avg_clustering,
    avg_degree,
    avg_link_betweenness,
    avg_node_betweenness,
    avg_shortest_path,
    characterize,
    diameter,
    fragmentation,
    lcc_size,
    link_betweenness,
    metric_vector,
    node_betweenness,
    two_terminal_reliability,
)
from .failures import (
    SCENARIO_NAMES,
    FailureConfiguration,
    FailureScenario,
    RunPlan,
    ScenarioRun,
    degraded_graph,
    generate_configuration,
    removal_count,
    run_scenario,
    seed_for_configuration,
)
from .pca import (
    DEFAULT_ALPHA,
    PcaModel,
    covariance,
    eigen_symmetric,
    energy_quantum,
    fit_pca,
    mean_covariance,
    normalize_pc,
    select_l,
)
from .surface import (
    RobustnessSurface,
    SurfaceSummary,
    build_surface,
    r_star,
    r_value,
    summarize,
)
from .io import emit_heatmap, load_edge_list
from .pipeline import (
    DEFAULT_MASTER_SEED,
    RunConfig,
    RunOutputs,
    config_from_manifest,
    replay_from_manifest,
    run_pipeline,
)

__all__ = [name for name in dir() if not name.startswith("_")]
