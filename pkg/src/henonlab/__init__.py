"""henonlab: certified dynamics of finitely generated Henon-map semigroups.

Green's function brackets, escape/boundedness classification, slice
measures and non-autonomous attracting basins for compositions of
generalized Henon maps of C^2.
"""

from ._kernels import BACKEND, MINUS, PLUS
from .basin import (
    AttractingParams,
    BasinResult,
    BasinVerdict,
    NotAttracting,
    basin_membership,
    boundary_bisect,
    estimate_attracting_params,
    strong_K_escape_witness,
)
from .classify import Classification, ClassificationGrid, Verdict, classify_grid, classify_point
from .currents import (
    SliceGrid,
    equidist_potential,
    julia_heatmap,
    laplacian_density,
    sample_green_on_slice,
)
from .filtration import (
    FiltrationData,
    FiltrationError,
    Region,
    escape_radii,
    factor_bounds,
    find_filtration,
    region_of,
)
from .green import (
    GreenEstimate,
    ResidualInterval,
    SequenceSpec,
    check_semi_invariance,
    green_estimate,
    green_k,
    green_levels,
    green_tilde_k,
    na_green,
    na_levels,
    single_map_green,
)
from .maps import (
    FORWARD,
    INVERSE,
    ComplexPoint,
    HenonFactor,
    HenonMap,
    LogOrbitState,
    OverflowSignal,
    degree,
    eval_factor,
    eval_factor_inverse,
    eval_map,
    henon_map,
    log_step,
    sup_norm,
)
from .semigroup import (
    BudgetError,
    GeneratorSet,
    Word,
    eval_word,
    make_generator_set,
    maps_equal_probabilistic,
    minimal_generating_set,
    words,
)
from .slices import SliceSpec, affine_plane, horizontal_line, vertical_line

__version__ = "0.1.0"
