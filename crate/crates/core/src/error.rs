use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the numeric kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("{what} did not converge (estimated relative error {est_err:e})")]
    NonConvergence { what: &'static str, est_err: f64 },

    #[error("step size underflow at s = {s} (h = {h:e}); the solution probably has a pole")]
    StepUnderflow { s: f64, h: f64 },

    #[error("maximum number of steps ({max_steps}) exceeded at s = {s}")]
    MaxStepsExceeded { s: f64, max_steps: usize },

    #[error("inconsistent Cauchy data: {reason} (residual {residual:e})")]
    InconsistentCauchyData { reason: &'static str, residual: f64 },

    #[error("operation requires a nonzero axis vector (a > 0)")]
    ZeroAxis,

    #[error("spherical chart is singular at s = {s} (sin theta = {sin_theta:e})")]
    ChartSingularity { s: f64, sin_theta: f64 },

    #[error("phase integrand has a pole near s = {s} (|sigma'| -> a)")]
    IntegrandPole { s: f64 },

    #[error("s = {s} is outside the trajectory span [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("denominator of the {map} map vanishes at s = {s}")]
    DenominatorVanishes { map: &'static str, s: f64 },

    #[error("PIV function q vanishes; the conventional form is singular there")]
    QVanishes,

    #[error("{what}: argument {value} outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    #[error("fit window too short: {periods:.2} oscillation periods (need at least {required})")]
    WindowTooShort { periods: f64, required: f64 },

    #[error("omega = {omega} outside [{lo}, {hi}]")]
    OmegaOutOfBounds { omega: f64, lo: f64, hi: f64 },

    #[error("connection formula gives a non-positive value {value} for exp(-2 pi omega)")]
    NonPositiveExponential { value: f64 },

    #[error("Im rho mismatch {mismatch:e}: the data are not those of a real LIA solution")]
    ImRhoMismatch { mismatch: f64 },

    #[error("symmetric branch {branch} infeasible for a = {a}, eps = {eps}")]
    BranchInfeasible { branch: &'static str, a: f64, eps: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures caused by the numerics rather than by bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::StepUnderflow { .. }
                | Error::MaxStepsExceeded { .. }
                | Error::ChartSingularity { .. }
                | Error::IntegrandPole { .. }
                | Error::DenominatorVanishes { .. }
                | Error::QVanishes
                | Error::ImRhoMismatch { .. }
                | Error::NonPositiveExponential { .. }
        )
    }
}
