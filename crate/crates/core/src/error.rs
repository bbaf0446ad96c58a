use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
///
/// Variants are split in two families: precondition violations (bad input,
/// the caller can fix them) and numerical failures raised while iterating.
/// [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has zero constant term and cannot be inverted")]
    SingularSeries,

    #[error("constant term {0} has no exact arctangent in this coefficient field")]
    NonRationalConstant(String),

    #[error("series of order {order} cannot be divided by r: coefficient r^0 t^{j} is nonzero")]
    NotDivisibleByR { order: usize, j: usize },

    #[error("truncation order exhausted: {0}")]
    OrderExhausted(String),

    #[error("matrix is not symmetric: max asymmetry {asymmetry:.3e} exceeds {tolerance:.1e}")]
    Asymmetric { asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rotation angle {angle} violates the graph bound: {bound}")]
    AngleBound { angle: f64, bound: String },

    #[error("axis point r = 0 requires limiting-branch data")]
    AxisWithoutLimit,

    #[error("third derivatives are unavailable for potential kind {0}")]
    NoThirdDerivatives(String),

    #[error("insufficient scale coverage: {0}")]
    InsufficientScales(String),

    #[error("injectivity certificate failed: {0}")]
    InjectivityFailed(String),

    #[error("vanishing noncharacteristic pivot while solving for r^{i} t^{j}")]
    VanishingPivot { i: usize, j: usize },

    #[error("map is singular near {point:?}: Jacobian condition number {condition:.3e}")]
    SingularMap { point: Vec<f64>, condition: f64 },

    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

impl Error {
    /// True for failures that arise inside numerical iterations (pivots,
    /// Newton, conditioning) rather than from invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSeries
                | Error::VanishingPivot { .. }
                | Error::SingularMap { .. }
                | Error::NoConvergence { .. }
        )
    }
}
