use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not in the time scale")]
    PointNotInScale(f64),

    #[error("endpoint {0} is not in the time scale")]
    EndpointNotInScale(f64),

    #[error("not delta-differentiable at {t}: {reason}")]
    NotDifferentiableHere { t: f64, reason: &'static str },

    #[error("no derivative available at {0}: finite differencing would leave the scale")]
    MissingDerivative(f64),

    #[error("quadrature on [{lo}, {hi}] stalled at error estimate {error:e}")]
    QuadratureFailure { lo: f64, hi: f64, error: f64 },

    #[error("invalid time scale: {0}")]
    InvalidScale(String),

    #[error("cannot parse scale descriptor `{text}`: {reason}")]
    Descriptor { text: String, reason: String },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("kernel variant mismatch: {0}")]
    VariantMismatch(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("degenerate window: a = b = {0}")]
    DegenerateWindow(f64),

    #[error("sup bound looks unbounded: coarse grid max {coarse}, refined max {fine}")]
    UnboundedSuspicion { coarse: f64, fine: f64 },

    #[error("unknown corollary `{0}`")]
    UnknownCorollary(String),

    #[error("sweep plan expands to nothing: {0}")]
    EmptyPlan(String),

    #[error("every scenario has a vanishing bound; ratio undefined")]
    AllDegenerate,

    #[error("invalid function spec `{0}`")]
    FunctionSpec(String),
}
