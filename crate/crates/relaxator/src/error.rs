//! Crate-wide error type.

use crate::operator::CMat;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{what} is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { what: String, deviation: f64 },

    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },

    #[error("vector length {0} is not a perfect square")]
    NotSquareLength(usize),

    #[error("frequency {value} outside bath grid [{min}, {max}]")]
    GridRange { value: f64, min: f64, max: f64 },

    #[error("principal-value part s is not filled; call s_from_gamma first")]
    ShiftMissing,

    #[error("operation requires a thermal (KMS) bath")]
    NonThermalBath,

    #[error("negative bath sample {value:.3e} at frequency {omega}")]
    NegativeBathSample { omega: f64, value: f64 },

    #[error("broadening must be positive, got {0}")]
    NonPositiveBroadening(f64),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("eigenvector matrix is near-defective (condition number {cond:.3e})")]
    Defective { cond: f64 },

    #[error("zero mode of the generator is {multiplicity}-fold degenerate")]
    DegenerateZeroMode {
        multiplicity: usize,
        basis: Vec<CMat>,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    Unconverged { what: String, iterations: usize },

    #[error("mode tracking lost branch (best overlap {overlap:.3})")]
    ModeTracking { overlap: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("mode set incomplete: resynthesis residual {residual:.3e}")]
    IncompleteModeSet { residual: f64 },

    #[error("trace conservation violated (residual {residual:.3e})")]
    ConservationViolated { residual: f64 },

    #[error("negative Pauli rate {value:.3e} at ({r}, {n})")]
    NegativeRate { r: usize, n: usize, value: f64 },

    #[error("rate matrix is reducible: {0} disconnected components")]
    ReducibleRates(usize),

    #[error("resonance fit rejected (relative residual {residual:.3e})")]
    FitRejected { residual: f64 },

    #[error("frequency {omega} coincides with an undamped mode")]
    PoleOnAxis { omega: f64 },

    #[error("initial correlation operator is not in the complementary space (residual {0:.3e})")]
    NotInComplementarySpace(f64),

    #[error("environment density operator is not normalized/stationary: {0}")]
    BadEnvironmentState(String),

    #[error("timescale convention conflict: {what} evaluated negative ({value:.3e})")]
    NegativeTimescale { what: String, value: f64 },

    #[error("scenario error at `{key}`: {reason}")]
    Scenario { key: String, reason: String },

    #[error("scenario parse error: {0}")]
    ScenarioSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}
