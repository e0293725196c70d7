"""Ideal circle patterns on closed oriented surfaces via curvature flows.

The library validates weighted cellular decompositions, triangulates them
through per-face star vertices, evaluates discrete curvature and its
symmetric Jacobian in both euclidean and hyperbolic background geometry,
and drives patterns to constant curvature with combinatorial Calabi and
Ricci flows. :class:`CalabiFlow` and :class:`RicciFlow` expose the flows as
scikit-learn style estimators; the same machinery is scriptable through the
``idealflow`` command-line tool.
"""

from .cellcomplex import (
    CellComplex,
    FaceStarCheck,
    Triangulation,
    build_complex,
    check_star,
    complex_from_json,
    complex_to_json,
    euler_characteristic,
    load_complex,
    parse_weight,
    star_ok,
    triangulate,
)
from .curvature import (
    CurvatureReport,
    JacobianMatrix,
    PatternState,
    calabi_energy,
    curvature_jacobian,
    curvature_map,
    curvature_vector,
    from_u,
    gauss_bonnet_residual,
    k_average,
    ricci_potential,
    spectral_gap,
    to_u,
)
from .errors import (
    ComplexError,
    ConvergenceWarning,
    DisconnectedComplexError,
    DomainError,
    EdgeUseCountError,
    GeometryMismatchError,
    IdealFlowError,
    InsufficientSamplesError,
    NonConvergenceError,
    NonOrientableError,
    QuadratureError,
    StarConditionError,
    StepUnderflowError,
    WeightRangeError,
)
from .existence import (
    EXACT_LIMIT,
    EmpiricalVerdict,
    ExistenceVerdict,
    H3Verdict,
    assess_existence,
    check_h3,
    classify_empirical,
)
from .flow import (
    CrossValidation,
    FlowConfig,
    RateFit,
    StepResult,
    Trajectory,
    cross_validate,
    fit_rate,
    fit_rate_from_samples,
    flow_rhs,
    flow_step,
    read_trajectory_csv,
    run_flow,
    target_curvature,
    write_trajectory_csv,
)
from .geometry import (
    TwoCircleConfig,
    angle_partials,
    area_partial_u,
    conductance,
    conductance_hyp,
    edge_length,
    inner_angle,
    inner_angles,
    triangle_area_hyp,
)
from .solvers import CalabiFlow, PatternFlowSolver, RicciFlow

__version__ = "0.1.0"

__all__ = [
    "CalabiFlow",
    "CellComplex",
    "ComplexError",
    "ConvergenceWarning",
    "CrossValidation",
    "CurvatureReport",
    "DisconnectedComplexError",
    "DomainError",
    "EXACT_LIMIT",
    "EdgeUseCountError",
    "EmpiricalVerdict",
    "ExistenceVerdict",
    "FaceStarCheck",
    "FlowConfig",
    "GeometryMismatchError",
    "H3Verdict",
    "IdealFlowError",
    "InsufficientSamplesError",
    "JacobianMatrix",
    "NonConvergenceError",
    "NonOrientableError",
    "PatternFlowSolver",
    "PatternState",
    "QuadratureError",
    "RateFit",
    "RicciFlow",
    "StarConditionError",
    "StepResult",
    "StepUnderflowError",
    "Trajectory",
    "TwoCircleConfig",
    "WeightRangeError",
    "angle_partials",
    "area_partial_u",
    "assess_existence",
    "build_complex",
    "calabi_energy",
    "check_h3",
    "check_star",
    "classify_empirical",
    "complex_from_json",
    "complex_to_json",
    "conductance",
    "conductance_hyp",
    "cross_validate",
    "curvature_jacobian",
    "curvature_map",
    "curvature_vector",
    "edge_length",
    "euler_characteristic",
    "fit_rate",
    "fit_rate_from_samples",
    "flow_rhs",
    "flow_step",
    "from_u",
    "gauss_bonnet_residual",
    "inner_angle",
    "inner_angles",
    "k_average",
    "load_complex",
    "parse_weight",
    "read_trajectory_csv",
    "ricci_potential",
    "run_flow",
    "spectral_gap",
    "star_ok",
    "target_curvature",
    "to_u",
    "triangle_area_hyp",
    "triangulate",
    "write_trajectory_csv",
]
