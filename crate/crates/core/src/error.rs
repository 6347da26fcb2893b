use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate node: vector shorter than the node tolerance")]
    DegenerateNode,
    #[error("oriented angle axis is not perpendicular to its arguments")]
    NotCoplanar,
    #[error("collision: mutual distance below tolerance")]
    Collision,
    #[error("unsupported body count {0}")]
    UnsupportedBodyCount(usize),
    #[error("eccentricity {0} outside [0, 1)")]
    EccentricityOutOfRange(f64),
    #[error("orbit is not elliptic (non-negative two-body energy)")]
    NotElliptic,
    #[error("rectilinear orbit (vanishing angular momentum)")]
    Rectilinear,
    #[error("chart singular: {0}")]
    ChartSingular(String),
    #[error("invalid actions: {0}")]
    InvalidActions(String),
    #[error("action overflow: {0}")]
    ActionOverflow(String),
    #[error("triangle inequality violated: {0}")]
    TriangleViolation(String),
    #[error("vanishing node ν{0}")]
    NodeSingular(usize),
    #[error("point outside chart domain: {0}")]
    DomainViolation(String),
    #[error("quadrature did not converge (last relative change {0:e})")]
    QuadratureNotConverged(f64),
    #[error("collision detected at t = {0}")]
    CollisionDetected(f64),
    #[error("integration step rejected at t = {0}")]
    StepRejected(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
}

impl Error {
    /// True for every declared chart singularity, including vanishing nodes.
    pub fn is_chart_singular(&self) -> bool {
        matches!(self, Error::ChartSingular(_) | Error::NodeSingular(_))
    }
}
