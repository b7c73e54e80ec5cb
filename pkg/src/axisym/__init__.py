"""Estimate axes of symmetry of planar distributions from random one-dimensional projections."""

from .errors import EmptyRegionError, ValidationError
from .estimator import (
    LevelSet,
    PointCloud,
    SplitSample,
    SymmetryProfile,
    center,
    epsilon_n,
    evaluate_profile,
    g_hat_at,
    hausdorff_axial,
    level_set,
    level_set_axes,
    profile,
    split_sample,
)
from .geometry import (
    AxisAngle,
    DirectionSet,
    UnitVector,
    apply_reflection,
    axial_distance,
    compose_axis,
    direction_grid,
    reflection_matrix,
    sample_uniform_directions,
)
from .peaks import PeakResult, ampd_minima, axes_from_profile, match_axes

__version__ = "0.1.0"
