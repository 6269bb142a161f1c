"""Continuous k-nearest-neighbor graph construction and companions: edge
filtrations, fast component clustering, Vietoris-Rips persistent homology
over Z/2, and variable-bandwidth graph Laplacians."""

__version__ = "0.1.0"

from .errors import (
    CknntdaError,
    DegenerateBandwidthError,
    ResourceLimitError,
    ValidationError,
)
from .geometry import (
    BandwidthProfile,
    PointCloud,
    analytic_bandwidth,
    bandwidth_array,
    knn_bandwidth,
    pairwise_distances,
    read_labels_csv,
    read_points_csv,
    validate_distance_matrix,
    write_labels_csv,
    write_points_csv,
)
from .graphs import (
    EdgeFiltration,
    Graph,
    cknn_filtration,
    edge_count_at_scale,
    fixed_eps_filtration,
    graph_at_count,
    graph_at_scale,
    knn_graph,
    multiscale_filtration,
    read_edges_csv,
    write_edges_csv,
)
from .clustering import (
    ComponentLabeling,
    TransitionSequence,
    UnionFind,
    binary_search_clusters,
    clustering_persistence_fraction,
    component_transitions,
    components_at_count,
    connected_components,
    labels_equal_as_partitions,
)
from .homology import (
    DEFAULT_SIMPLEX_CAP,
    Barcode,
    SimplicialComplex,
    StableInterval,
    betti_at_count,
    betti_curves,
    betti_numbers,
    homology_persistence_fraction,
    persistent_homology,
    read_barcode_csv,
    stable_interval,
    value_realizable_counts,
    vr_complex,
    write_barcode_csv,
)
from .spectral import (
    CIRCLE_DENSITY,
    CIRCLE_EIGENVALUE_TARGETS,
    GEOMETRY_CHOICES,
    KERNEL_SHAPES,
    LaplacianSystem,
    MomentConstants,
    PowerLawExperiment,
    bandwidth_power_law_experiment,
    circle_rmse_grid,
    fit_power_law,
    geometry_weights,
    kernel_matrix,
    knn_density,
    laplacian_system,
    moment_constants,
    pointwise_estimate,
    read_sweep_csv,
    spectrum,
    theory_delta,
    theory_slope,
    unit_ball_volume,
    unnormalized_laplacian,
    write_sweep_csv,
    zero_multiplicity,
)
from .datagen import (
    DEFAULT_PATTERN_PERIODS,
    DEFAULT_THREE_BOXES,
    PATTERN_KINDS,
    PatchCloudSpec,
    decimate,
    extract_patches,
    gaussian_density,
    gen_cut_gaussian,
    gen_cut_gaussian_1d_embedded,
    gen_figure_eight,
    gen_pattern_image,
    gen_spirals,
    gen_three_boxes,
    gen_uniform_circle,
    patch_cloud,
    pattern_default_size,
    pattern_periods,
    read_pgm,
    write_pgm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
