"""Closed-form single-point array response control and pattern synthesis."""

from .array import (
    ArrayModel,
    CouplingModel,
    CouplingSpec,
    ElementSpec,
    PatternKind,
    SingularDirectionWarning,
    SteeringTable,
    array_from_dict,
    coupling_matrix,
    element_gain,
    load_array,
    steering_matrix,
    steering_vector,
)
from .equivalence import (
    EquivalenceReport,
    check_corollary1,
    check_corollary2,
    check_prop4,
    equivalence_report,
    is_centro_symmetric,
    rho_bar,
    rho_breve,
    rho_tilde,
    t_map,
    t_map_inverse,
)
from .response import (
    Algorithm,
    BeamAxisNullError,
    BMatrix,
    Circle,
    ConstructionUndefinedError,
    Decomposition,
    DegenerateLevelError,
    NoRealCoefficientError,
    ResponseControlError,
    StepResult,
    a2rc_step,
    b_matrix,
    beta_circle,
    c2word_step,
    control_step,
    db_to_lin,
    decompose,
    lemma1_construct,
    lin_to_db,
    mu_circle,
    mu_extremes,
    optimal_beta,
    power_response,
    q_matrix,
    word_step,
    wng,
)
from .synthesis import (
    InitialWeight,
    MaskRegion,
    PatternMask,
    RegionKind,
    SelectionPolicy,
    SynthesisConfig,
    SynthesisTrace,
    chebyshev_weights,
    evaluate_pattern,
    select_control_angle,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayModel",
    "CouplingModel",
    "CouplingSpec",
    "ElementSpec",
    "PatternKind",
    "SingularDirectionWarning",
    "SteeringTable",
    "array_from_dict",
    "coupling_matrix",
    "element_gain",
    "load_array",
    "steering_matrix",
    "steering_vector",
    "EquivalenceReport",
    "check_corollary1",
    "check_corollary2",
    "check_prop4",
    "equivalence_report",
    "is_centro_symmetric",
    "rho_bar",
    "rho_breve",
    "rho_tilde",
    "t_map",
    "t_map_inverse",
    "Algorithm",
    "BeamAxisNullError",
    "BMatrix",
    "Circle",
    "ConstructionUndefinedError",
    "Decomposition",
    "DegenerateLevelError",
    "NoRealCoefficientError",
    "ResponseControlError",
    "StepResult",
    "a2rc_step",
    "b_matrix",
    "beta_circle",
    "c2word_step",
    "control_step",
    "db_to_lin",
    "decompose",
    "lemma1_construct",
    "lin_to_db",
    "mu_circle",
    "mu_extremes",
    "optimal_beta",
    "power_response",
    "q_matrix",
    "word_step",
    "wng",
    "InitialWeight",
    "MaskRegion",
    "PatternMask",
    "RegionKind",
    "SelectionPolicy",
    "SynthesisConfig",
    "SynthesisTrace",
    "chebyshev_weights",
    "evaluate_pattern",
    "select_control_angle",
    "synthesize",
    "__version__",
]
