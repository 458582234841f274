//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building channels, walking, or
/// simulating. Numerical tolerances quoted in the messages are the ones the
/// checks were performed with.
#[derive(Debug, Error)]
pub enum AdqcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown gate name `{0}`")]
    UnknownGate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not unitary (max |U\u{2020}U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not diagonal (max off-diagonal magnitude {max_offdiag:.3e})")]
    NotDiagonal { max_offdiag: f64 },

    #[error("state vector is not normalised (|\u{2016}\u{3c8}\u{2016}\u{b2} - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    /// A Kraus operator failed the proportional-to-unitary check. For this
    /// scheme that always means the ancilla measurement basis is not
    /// symmetric with respect to the back-action induced states.
    #[error(
        "non-unitary branch for outcome `{outcome}`: K\u{2020}K deviates from p\u{b7}I by {deviation:.3e} \
         (the measurement basis is not symmetric with respect to the back-action induced states)"
    )]
    NonUnitaryBranch { outcome: String, deviation: f64 },

    #[error(
        "unremoved local part: off-diagonal magnitude {max_offdiag:.3e} remains after local correction"
    )]
    UnremovedLocalPart { max_offdiag: f64 },

    #[error("singular interaction strength alpha = {alpha}: cos(2 alpha) = 0 leaves the branch angle undefined")]
    SingularStrength { alpha: f64 },

    #[error("generator closure exceeded {limit} elements; not a finite group")]
    NotAFiniteGroup { limit: usize },

    #[error("effectively dense: the asserted rational increments generate more than {limit} residues")]
    EffectivelyDense { limit: usize },

    #[error("rational flag inconsistent with walk increments: flag gives {expected}, channel gives {got}")]
    InconsistentRational { expected: f64, got: f64 },

    #[error("no expected-time estimate for gate `{0}`")]
    MissingGateEstimate(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, AdqcError>;
