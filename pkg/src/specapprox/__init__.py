"""Measure and dimension estimates for compact sets approximated in
Hausdorff distance, with band-structure pipelines for periodic operators."""

from .convergence import (
    ApproximationRecord,
    AtomicMeasure,
    ConvergenceReport,
    CriterionReport,
    Lebesgue,
    Measure1D,
    PiecewiseDensity,
    ReportRow,
    corollary_criterion,
    fattened_measure_sequence,
    indicator_convergence_probe,
    measure,
    semicontinuity_check,
)
from .dimension import (
    ContentTrendReport,
    CoverStats,
    ExponentFit,
    InsufficientDataError,
    NotApplicableError,
    content_trend,
    dim_bound_direct,
    dim_bound_last,
    hausdorff_content_upper,
)
from .floquet import (
    BandSpectrum,
    NotHermitianError,
    PeriodicPotential,
    band_spectrum,
    bandwidth_bound,
    build_fiber,
    cover_from_bands,
    cover_from_eigenvalues,
    eigenvalues,
    estimate_measure_via_fibers,
    fiber_eigenvalues,
    proxy_deltas,
    sampled_stabilizer_contains,
    stabilizer_contains,
)
from .intervals import (
    CompactSet,
    EmptySetError,
    Interval,
    IntervalSet,
    InvalidRadiusError,
    PointSet,
    as_intervals,
    components,
    contains_point,
    contains_set,
    directed_distance,
    distance_to_set,
    fatten,
    hausdorff_distance,
    lebesgue,
    normalize,
    point_set,
    set_from_obj,
    set_to_obj,
    sets_equal,
)
from .models import (
    almost_mathieu,
    cantor_approximation,
    convergents,
    fibonacci_potential,
    fibonacci_word,
    free_potential,
    grid_approximation,
)

__version__ = "0.1.0"
