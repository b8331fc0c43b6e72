"""Bottleneck geometry of windowed point configurations.

The library computes the bijection-infimum (bottleneck) distance between
finite windowed point multisets, detects approximate translation symmetry
(almost periods), estimates densities and shape discrepancy constants, and
cross-checks the point-set picture against its counting-measure picture
through convolution fields.
"""

from .core import (
    BALL,
    CUBE,
    EMPTY_WINDOW,
    PointConfiguration,
    Window,
    as_point,
    config,
    count_in,
    fits_inside,
    restrict,
    shrink_window,
    translate,
    unit_ball_volume,
)
from .errors import (
    ApsetsError,
    DimensionMismatchError,
    GridMismatchError,
    SizeLimitError,
    ValidationError,
    WindowTooSmallError,
)
from .generators import (
    GeneratorSpec,
    LatticeParams,
    converging_family,
    generate,
    integer_lattice,
    perturbed_line,
    standard_corpus,
    with_extra_point,
    with_removed_point,
)
from .harness import (
    CheckResult,
    TheoremReport,
    run_suite,
    trusted_distance,
    verify_bochner_smoke,
    verify_limit_theorem,
    verify_period_transfer,
    verify_set_measure_equivalence,
)
from .io import config_from_dict, config_to_dict, dumps_canonical, load_pointset, save_pointset
from .matching import (
    CollarSpec,
    DistanceResult,
    MatchingWitness,
    bottleneck_distance,
    brute_force_distance,
    matching_feasible,
)
from .measures import (
    Component,
    ConvolutionField,
    MeasureScanReport,
    SampleGrid,
    TestFunction,
    component_count_match,
    components,
    convolve,
    default_measure_grid,
    eta_for,
    field_distance,
    field_values,
    measure_period_check,
    scan_measure_periods,
    weak_uniform_distance,
)
from .scanner import (
    AlmostPeriodReport,
    PeriodScanSpec,
    group_property_check,
    is_almost_period,
    s_property_estimate,
    scan_periods,
    tau_grid,
    windowed_shift_distance,
)
from .stats import (
    DensityEstimate,
    DensitySample,
    DiscrepancyObservation,
    DiscrepancyReport,
    default_ball_centers,
    density_estimate,
    discrepancy_scan,
    local_count_max,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
