use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("unknown irrep {0}")]
    UnknownIrrep(String),

    #[error("grid of {points} points cannot integrate bandwidth {bandwidth} exactly (need more than {})", 2 * .bandwidth)]
    GridTooSmall { points: usize, bandwidth: usize },

    #[error("integrand returned a non-finite value")]
    NonFinite,

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("multiplicity of {label} is not an integer: inner product {value}")]
    NonIntegerMultiplicity { label: String, value: f64 },

    #[error("projector check failed: {0}")]
    BadProjector(String),

    #[error("physical Hilbert space is empty")]
    EmptyPhysicalSpace,

    #[error("seed state is not normalized (norm {0})")]
    UnnormalizedSeed(f64),

    #[error("multiplicity {multiplicity} of {label} exceeds its dimension {dim}; no resolution of the identity exists")]
    MultiplicityExceedsDimension { label: String, multiplicity: usize, dim: usize },

    #[error("seed does not resolve the identity (residual {residual:.3e}, tolerance {tolerance:.1e})")]
    ResolutionOfIdentity { residual: f64, tolerance: f64 },

    #[error("state failed certification: {0}")]
    Certification(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario has no matrix-level data: {0}")]
    ProfileOnly(String),

    #[error("invalid scenario config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
