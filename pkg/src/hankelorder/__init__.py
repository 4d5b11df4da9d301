"""Model order estimation for sums of complex exponentials from Hankel matrices."""
from .criteria import (
    CriterionTrace,
    DegenerateCostError,
    criterion_trace,
    ester_bound,
    ester_cost,
    samos_bound,
    samos_cost,
)
from .estimators import (
    ConstrainedOrderEstimator,
    EsterOrderEstimator,
    SamosOrderEstimator,
    ThresholdOrderEstimator,
)
from .hankel import (
    HankelShape,
    ShiftPair,
    SvdSubspaces,
    gap_distance,
    hankel,
    nearest_orthonormal,
    principal_angles,
    shift_pair,
    svd_subspaces,
)
from .selectors import (
    OrderSelectionError,
    SelectionResult,
    select_constrained,
    select_ester,
    select_samos,
    select_threshold,
)
from .signal_model import Mode, NoisySignal, SignalSpec, add_noise, preset, synthesize
from .thresholds import (
    ThresholdSpec,
    circulant_norm_bound,
    hankel_norm_cdf_lower,
    kappa,
    mp_density,
    tau_complex,
    tau_gavish,
    tau_real,
)

__version__ = "0.1.0"
