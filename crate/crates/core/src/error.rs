use thiserror::Error;

use crate::vec2::Vec2;

#[derive(Debug, Error)]
pub enum Error {
    #[error("velocity direction undefined at k = 0")]
    UndefinedDirection,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("wave-vector ({:.6}, {:.6}) 1/nm lies outside the k-space box of half-width {k_max} 1/nm{}", k.x, k.y, particle.map(|p| format!(" (particle {p})")).unwrap_or_default())]
    OutOfBox {
        k: Vec2,
        k_max: f64,
        particle: Option<usize>,
    },

    #[error("occupancy bookkeeping corrupted: {0}")]
    Bookkeeping(String),

    #[error("excluded point: occupation {0} is not strictly inside (0, 1)")]
    ExcludedPoint(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read configuration file {}: {cause}", path.display())]
    ConfigFile {
        path: std::path::PathBuf,
        cause: std::io::Error,
    },

    #[error("{}:{line}:{column}: {message}", path.display())]
    ConfigSyntax {
        path: std::path::PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed output file {}: {message}", path.display())]
    Format {
        path: std::path::PathBuf,
        message: String,
    },

    #[error("runs cannot be compared: {0}")]
    Incomparable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
