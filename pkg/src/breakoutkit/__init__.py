"""Borehole breakout characterization from acoustic televiewer image logs.

The pipeline: segmentation grids (or raw amplitude/radius signals) are
turned into candidate breakout picks per depth, filtered by an
azimuthal-symmetry validation rule, scored against manual annotations on a
uniform depth grid, and propagated into stress-magnitude estimates.
Synthetic scene generation and seeded training-set augmentation support
benchmarking and model training.
"""

from .core import (
    AMPLITUDE,
    RADIUS,
    STATUS_CANDIDATE,
    STATUS_REJECTED_COUNT,
    STATUS_REJECTED_SEPARATION,
    STATUS_VALIDATED,
    BreakoutKitError,
    BreakoutPick,
    GeometryError,
    GridGeometry,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    ParseError,
    PickSet,
    ProbGrid,
    SingularityError,
    azimuth_of_column,
    grids_equal,
    union_masks,
)
from .gridio import read_grid, read_picks, write_grid, write_picks
from .postproc import (
    MIN_WIDTH_DEG,
    CircularRun,
    binarize,
    extract_runs,
    picks_from_mask,
    rasterize_picks,
    run_to_pick,
)
from .validation import (
    DepthGroup,
    ValidationOutcome,
    circ360,
    validate,
    validate_depth,
)
from .peakdetect import PeakDetectParams, detect_row, peak_detect, smooth_circular
from .evaluation import (
    EvaluationReport,
    MatchResult,
    axial_stats,
    balanced_bce,
    circ_diff,
    circular_stats,
    evaluate_picks,
    iou,
    match_picks,
    pick_errors,
    rates,
    resample_picks,
    rose_histogram,
    wsm_quality,
)
from .stress import StressParams, sensitivity_sweep, shmax, width_sensitivity
from .augment import (
    AugmentConfig,
    TrainingSample,
    augment_set,
    crop_enlarge,
    flip_depth,
    load_samples,
    save_samples,
    shift_azimuth,
)
from .synthgen import (
    ArtifactStripes,
    Background,
    BreakoutPair,
    Fracture,
    Keyseat,
    SceneSpec,
    Washout,
    render,
    scene_suite,
)

__version__ = "0.1.0"
