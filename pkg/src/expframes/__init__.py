"""Exact frame analysis for exponential systems on sub-multitiling regions."""

from .errors import (
    DimensionMismatchError,
    EmptyRegionError,
    ExhaustedAttemptsError,
    ExpFramesError,
    LevelExceededError,
    NonHermitianError,
    NotExactMultitileError,
    PreconditionViolationError,
    SceneParseError,
    SizeExceededError,
)
from .finite_oracle import (
    FiniteScene,
    OracleComparison,
    brute_force_bounds,
    compare,
    fiber_bounds_finite,
    finite_annihilator,
)
from .frames import (
    FrameReport,
    HermitianSpectrum,
    fiber_matrix,
    frame_check,
    hermitian_eigenvalues,
    riesz_check,
    tightness_defect,
)
from .lattice import (
    LatticePoint,
    SeparableLattice,
    annihilator,
    character,
    covolume,
    fundamental_domain,
    reduce_mod,
)
from .region import (
    Box,
    BoxRegion,
    bounding_box,
    box_region,
    canonicalize,
    contains_point,
    intersect,
    measure,
    subtract,
    translate,
    union,
)
from .shift_search import (
    SearchConfig,
    SearchResult,
    find_frame_shifts,
    optimize_shifts,
    pipeline_subtile_to_frame,
)
from .tiling import (
    Cell,
    CellDecomposition,
    complete_to_multitile,
    decompose,
    gamma_tilde,
    is_exact_multitile,
    multiplicity_at,
    subtiling_level,
)

__version__ = "0.1.0"
