use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("grid size N = {0} is odd; symmetry exactness requires even N")]
    OddGridSize(usize),
    #[error("grid size N = {0} is below the minimum of 8")]
    GridTooSmall(usize),
    #[error("truncation half-width L = {0} must be positive")]
    NonPositiveLength(f64),
    #[error("fields live on different grids ({0}x{0} vs {1}x{1})")]
    GridMismatch(usize, usize),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("{0} requires a nonzero field")]
    ZeroField(&'static str),
    #[error("input to {op} has symmetry defect {defect:.3e} above tolerance {tol:.3e}")]
    AsymmetricInput {
        op: &'static str,
        defect: f64,
        tol: f64,
    },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("potential fails the discrete positivity condition: {0}")]
    BadPotential(String),
    #[error("fiber map has no positive interior maximum (flat or degenerate field)")]
    DegenerateFiber,
    #[error("solver diverged: {0}")]
    Diverged(String),
    #[error("mountain-pass path collapsed: max node energy {0:.3e} fell below {1:.3e}")]
    PathCollapse(f64, f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
