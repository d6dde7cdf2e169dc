"""Solvers, approximation algorithms and generators for projection games."""

__version__ = "0.1.0"

from .core import (
    Assignment,
    BudgetExceeded,
    Component,
    DuplicateEdge,
    IndexOutOfRange,
    InfeasibleParams,
    InstanceStats,
    LabelCoverError,
    ProjectionGame,
    ShapeMismatch,
    SolveReport,
    SymbolOutOfRange,
    TableLengthMismatch,
    build_game,
    compute_stats,
    connected_components,
    lift_assignment,
    value,
)
from .exact import (
    InvalidDecomposition,
    TreeDecomposition,
    brute_force_opt,
    exact_decomposition,
    heuristic_decomposition,
    is_satisfiable,
    tree_dp_solve,
    validate_decomposition,
)
from .approx import (
    NotInSigmaStar,
    SigmaStarCache,
    UniformAssumptionViolated,
    best_of,
    compute_sigma_star,
    divide_and_conquer,
    greedy_assignment,
    know_neighbors_neighbors,
    know_your_neighbors,
    satisfy_one_neighbor,
)
from .smooth import (
    SmoothnessReport,
    default_mu,
    measure_smoothness,
    smooth_approx,
    smooth_exact,
)
from .planar import (
    BakerPartition,
    PlanarityCheckFailed,
    baker_partition,
    euler_planarity_ok,
    ptas,
    residual_game,
)
from .reductions import (
    COLOR_PAIRS,
    ColoringExtraction,
    ColoringGraph,
    GenerationFailed,
    MatrixTiling,
    ThreeColMaps,
    TilingMaps,
    TilingSolution,
    brute_force_tiling,
    build_coloring_graph,
    build_matrix_tiling,
    extract_coloring,
    extract_tiling,
    from_matrix_tiling,
    from_planar_3col,
    gen_coloring_graph,
    gen_matrix_tiling,
    gen_planar_grid,
    gen_random_satisfiable,
    gen_smooth,
    validate_tiling_solution,
)
