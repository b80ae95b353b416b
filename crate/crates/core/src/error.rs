use thiserror::Error;

/// Errors raised by domain construction and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilliardError {
    #[error("invalid domain parameters: {0}")]
    InvalidDomain(String),

    #[error("boundary is not strictly convex near theta = {theta} (radius of curvature {radius})")]
    NotConvex { theta: f64, radius: f64 },

    #[error("grazing incidence: phi = {phi} is outside the admissible interval")]
    Grazing { phi: f64 },

    #[error("orbit stopped at step {index}: {source}")]
    OrbitStep {
        index: usize,
        #[source]
        source: Box<BilliardError>,
    },

    #[error("{what} did not converge (bracket [{lo}, {hi}], last residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    #[error("quadrature did not reach tolerance {requested:e} (achieved {achieved:e})")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("degenerate chord: endpoints coincide at s = {s}")]
    DegenerateChord { s: f64 },

    #[error("near-tangent arrival: sin(phi') = {sin_phi1:e}")]
    NearTangency { sin_phi1: f64 },

    #[error("Lazutkin chart range exceeded: y = {y} at x = {x}")]
    ChartRange { x: f64, y: f64 },

    #[error("invalid rotation number {p}/{q}: {reason}")]
    RotationNumber { p: i64, q: i64, reason: &'static str },

    #[error("periodic orbit search for {p}/{q} failed (best residual {best_residual:e})")]
    SearchFailed { p: i64, q: i64, best_residual: f64 },

    #[error("converged orbit has winding {found}, expected {expected}")]
    Winding { expected: i64, found: i64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("value {value} outside the attainable range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("domain file: {0}")]
    DomainFile(String),
}

pub type Result<T> = std::result::Result<T, BilliardError>;
