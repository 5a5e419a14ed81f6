"""Band structure, spectral gap estimates, and perturbation checks for
p-periodic Jacobi matrices.

Two independent routes to the band edges are provided: eigenvalues of the
two real boundary-condition matrices (bands.band_structure) and bisection on
the transfer-matrix discriminant (discriminant.band_edges_by_bisection).
On top of them sit the eight coefficient-based estimates of the gap/band
measures, first-order gap predictions for the weakened-coupling family, a
randomized verification campaign, and a CLI.
"""

from .core import (
    LengthMismatch,
    NonFiniteEntry,
    NonPositiveCoupling,
    NonPositiveScale,
    PeriodicJacobi,
    PeriodTooSmall,
    SpectrumSummary,
    instance_from_json,
    instance_to_json,
    new_periodic_jacobi,
    scale,
    shift,
)
from .eigen import NoConvergence, SymmetricMatrix, symmetric_eigenvalues
from .discriminant import (
    BandIndexOutOfRange,
    DiscriminantEval,
    RootCountMismatch,
    band_edges_by_bisection,
    discriminant,
    discriminant_many,
    dispersion,
    dispersion_csv,
    dispersion_table,
    monodromy,
    transfer_matrix,
)
from .bands import (
    Band,
    CrossCheckResult,
    Gap,
    Spectrum,
    UnsupportedK,
    band_structure,
    cross_check,
    floquet_matrix,
    spectrum_to_json,
)
from .estimates import (
    INEQUALITY_IDS,
    EstimateReport,
    check_estimates,
    default_tolerance,
    estimate_rhs,
    report_to_json,
)
from .perturbation import (
    BadC,
    IndexOutOfRange,
    PerturbationPrediction,
    Theorem1Family,
    extreme_edge_shift,
    first_order_prediction,
    free_instance,
    h_eigenvalue_split,
    h_matrix,
    h_matrix_sandwich,
    theorem1_csv,
    theorem1_instance,
    theorem1_report,
)
from .fuzz import (
    FuzzConfig,
    FuzzReport,
    SharpnessResult,
    fuzz_csv,
    fuzz_estimates,
    fuzz_summary_json,
    random_instance,
    sharpness_search,
    trial_rng,
)

__version__ = "0.1.0"


def warm_up() -> None:
    """Compile the jitted kernels on tiny inputs (idempotent).

    Call before timing anything; the first use of each kernel otherwise pays
    the JIT cost.
    """
    J = new_periodic_jacobi((1.0, 2.0), (0.0, 0.0))
    band_structure(J)
    band_edges_by_bisection(J)
    dispersion(J, 1, 1.0)
