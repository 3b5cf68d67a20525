use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("jet coefficient {0} is not finite")]
    NonFinite(String),
    #[error("jet parse error: {0}")]
    Parse(String),
    #[error("degenerate tangent frame at ({x}, {y})")]
    DegenerateFrame { x: f64, y: f64 },
    #[error("degenerate metric (EG - F^2 = {0})")]
    DegenerateMetric(f64),
    #[error("zero tangent direction")]
    ZeroDirection,
    #[error("input is not isothermic (|E - G| = {de}, |F| = {f})")]
    NotIsothermic { de: f64, f: f64 },
    #[error("point is not axiumbilic (residuals {a0}, {a1})")]
    NotAxiumbilic { a0: f64, a1: f64 },
    #[error("degenerate axiumbilic point: {0}")]
    Degenerate(String),
    #[error("no rotation makes the linear part reducible")]
    NonReducible,
    #[error("identically zero rotation quintic")]
    ZeroQuintic,
    #[error("series is not in adapted form: {0}")]
    NotAdapted(String),
    #[error("implicit solution failed: {0}")]
    ImplicitFailure(String),
    #[error("continuation stalled at t = {t}: {reason}")]
    Stall { t: f64, reason: String },
    #[error("lost the axiumbilic point near ({x}, {y})")]
    LostPoint { x: f64, y: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
