use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate stratum (empty zero set, torus)")]
    DegenerateStratum,

    #[error("genus {g} too small to pad partition of {sum} (need 2g-2 > {sum})")]
    GenusTooSmall { g: u32, sum: u32 },

    #[error("origami is not connected")]
    Disconnected,

    #[error("spin parity undefined: zero of odd order {0}")]
    SpinNotApplicable(u32),

    #[error("budget exceeded at N = {reached} (limit {limit})")]
    BudgetExceeded { reached: usize, limit: usize },

    #[error("insufficient data: need {need} points, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("cache conflict: {0}")]
    CacheConflict(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
