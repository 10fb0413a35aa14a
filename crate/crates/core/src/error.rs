use num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("Gauss series diverges at 1: Re(r - p - q) = {0} <= 0")]
    Divergence(f64),

    #[error("three-term recurrence breaks down at k = {k} (a * P_k vanishes)")]
    RecurrenceBreakdown { k: usize },

    #[error("{what}: z = {z} maps to |t| = {modulus:.6}, outside the usable disc |t| < {limit:.6}")]
    OutOfDisc {
        what: String,
        z: Complex64,
        modulus: f64,
        limit: f64,
    },

    #[error("{what}: z = {z} lies on the branch cut of the prefactor")]
    BranchCut { what: String, z: Complex64 },

    #[error("no convergence after {iterations} iterations (last change {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds requested {requested:e}")]
    QuadratureFailure { estimate: f64, requested: f64 },

    #[error("path point {point} is {distance:.3e} from singularity {singularity} (minimum {minimum:.3e})")]
    PathTooCloseToSingularity {
        point: Complex64,
        singularity: Complex64,
        distance: f64,
        minimum: f64,
    },

    #[error("integrator step size underflow near z = {at} (h = {step:e})")]
    StepFailure { at: Complex64, step: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("row {row}: {source}")]
    RowOutOfDomain {
        row: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by the parameter tuple rather than by the numerics.
    pub fn is_parameter_error(&self) -> bool {
        match self {
            Error::InvalidParameters(_) | Error::Divergence(_) | Error::Pole(_) => true,
            Error::RowOutOfDomain { source, .. } => source.is_parameter_error(),
            _ => false,
        }
    }
}
