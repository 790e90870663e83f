"""Numerical laboratory for the Paulsen and projection problems.

Frames and approximate Schauder frames over small real spaces, the
closest-point maps and gradient flow around equal-norm Parseval families,
projection balance and chordal distances, and a seeded experiment engine
comparing achieved distances against the known theoretical ceilings.
"""

from .asf import (
    ASF,
    ASFReport,
    PNormSpace,
    analyze_asf,
    asf_dist,
    asf_operator,
    dual_exponent,
    dual_norm,
    from_hilbert,
    generate_asf,
    norming_functional,
    pnorm,
    to_hilbert,
)
from .documents import (
    FLOW_TRACE_COLUMNS,
    SWEEP_COLUMNS,
    read_asf_doc,
    read_auerbach_doc,
    read_frame_doc,
    read_projection_doc,
    sweep_csv_text,
    write_asf_doc,
    write_auerbach_doc,
    write_flow_trace_csv,
    write_frame_doc,
    write_projection_doc,
    write_sweep_csv,
)
from .errors import (
    AsymmetricInput,
    BoundViolation,
    DocumentError,
    FrameLabError,
    IndivisibleRepeat,
    Infeasible,
    InvalidSystem,
    NegativeChordal,
    NoComplement,
    NoConvergence,
    NotIdempotent,
    NotParseval,
    NotSelfAdjoint,
    NotUnitNorm,
    RankMismatch,
    ShapeMismatch,
    SingularOperator,
    StepTooLarge,
    UnsupportedExponent,
    UnsupportedShape,
    ZeroRank,
    ZeroVector,
)
from .flow import (
    FlowConfig,
    FlowTrace,
    TangentFamily,
    flow_step,
    run_flow,
    tangent_family,
)
from .frames import (
    Frame,
    FrameReport,
    analysis,
    analyze_frame,
    closest_equal_norm,
    closest_parseval,
    frame_dist,
    frame_operator,
    generate,
    naimark_complement,
    synthesis,
)
from .lab import (
    ExperimentRecord,
    InstanceBundle,
    InstanceSpec,
    PenaltySchedule,
    SummaryRow,
    default_certify_tol,
    estimate_paulsen,
    generate_instance,
    nearest_enp_alternating,
    nearest_enp_asf_search,
    record_to_row,
    summarize_records,
)
from .projections import (
    AuerbachSystem,
    BanachBalance,
    ProjectionOp,
    balance_epsilon_banach,
    balance_epsilon_hilbert,
    canonical_auerbach,
    certify_projection,
    chordal_distance,
    projection_pair_distance,
)
from .spectral import (
    MatrixFunctionals,
    SpectralDecomposition,
    general_spectrum,
    inv_sqrt_psd,
    is_symmetric,
    matrix_functionals,
    sym_eig,
)

__version__ = "0.1.0"
