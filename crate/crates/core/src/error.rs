use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the set is empty")]
    EmptySet,
    #[error("no cell lies entirely inside the set at h = {h}; refine the resolution")]
    EmptyInner { h: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (expected 1, 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("budget exceeded: {needed} elements requested, cap is {cap}{}", suggestion_suffix(.suggested_h))]
    BudgetExceeded {
        needed: u128,
        cap: u128,
        suggested_h: Option<f64>,
    },
    #[error("shift is not a lattice vector of the grid (h = {h})")]
    NonLatticeShift { h: f64 },
    #[error("radius {r} is below the grid resolution {h}")]
    ResolutionTooCoarse { r: f64, h: f64 },
    #[error("set is not symmetric about the origin")]
    NotSymmetric,
    #[error("point lies outside the convex hull")]
    PointOutsideHull,
    #[error("n = {n} is below the admissible threshold {threshold}")]
    QThresholdNotMet { n: u32, threshold: u32 },
    #[error("operation requires a set of positive measure")]
    NullMeasure,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn suggestion_suffix(h: &Option<f64>) -> String {
    match h {
        Some(h) => format!(" (try coarsening to h = {h})"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
