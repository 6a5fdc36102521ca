"""UMAP-based graph drawing with sparsified and linear-time variants."""

from .graph import (
    EdgeWeighted,
    Graph,
    GraphError,
    Layout,
    build_graph,
    largest_connected_component,
)
from .io import (
    read_edge_list,
    read_layout_csv,
    read_matrix_market,
    render_svg,
    write_layout_csv,
)
from .neighbors import (
    UNREACHABLE,
    DirectedKnn,
    KnnGraph,
    SparseDistanceSet,
    all_pairs_bfs,
    fuzzy_union,
    knn_from_full_distances,
    partial_bfs,
    smooth_knn_weights,
)
from .sparsify import (
    ResistanceTable,
    SolverError,
    effective_resistance_approx,
    effective_resistance_exact,
    sparsifier_target,
    sparsify,
)
from .layout import (
    ConvergenceError,
    GradientTerm,
    OptimizationDiverged,
    OptimizerConfig,
    RunReport,
    fit_ab,
    low_dim_similarity,
    make_sparsifier,
    optimize_full,
    optimize_sampled,
    pair_cost,
    pair_cost_gradient,
    pair_gradient_terms,
    random_init,
    run_gumap,
    run_sl_gumap,
    run_ss_gumap,
    run_sssl_gumap,
    spectral_init,
)
from .metrics import (
    MetricReport,
    compute_metrics,
    count_crossings,
    improvement,
    neighborhood_preservation,
    shape_metric,
    stress,
)
from .generators import synth_graph
from .bench import BenchSuite, loglog_slope, run_suite

__version__ = "0.1.0"
