use thiserror::Error;

use crate::conditions::DiagTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("graph size must be at least 2 (got n = {0})")]
    TooFewEdges(usize),

    #[error("momenta must be nonzero")]
    ZeroMomentum,

    #[error("momenta must differ in absolute value")]
    EqualMomenta,

    #[error("coupling c must be nonzero")]
    ZeroCoupling,

    #[error("operands are bound to different parameters")]
    ParamsMismatch,

    #[error("{what} index {index} out of range {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },

    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("region {region} is not valid for n = {n}")]
    InvalidRegion { region: String, n: usize },

    #[error("expected a {expected} state, got a {got} state")]
    WrongParticle {
        expected: &'static str,
        got: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("wave is discontinuous across the diagonal on {} edge(s)", .0.iter().filter(|t| !t.is_zero()).count())]
    Discontinuous(Vec<DiagTrace>),

    #[error("point ({x}, {y}) does not lie in region {region}")]
    PointOutsideRegion { region: String, x: f64, y: f64 },

    #[error("finite-difference stencil of width {h} at ({x}, {y}) leaves region {region}")]
    StencilCrossesBoundary {
        region: String,
        x: f64,
        y: f64,
        h: f64,
    },
}
