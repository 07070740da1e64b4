use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice dimensions {nx}x{ny} are too small (need at least 2x2)")]
    LatticeTooSmall { nx: usize, ny: usize },
    #[error("site {site} out of range for {n} spins")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("spin count mismatch: {0} vs {1}")]
    SpinCountMismatch(usize, usize),
    #[error("too many spins: {0} (limit {1})")]
    TooManySpins(usize, usize),
    #[error("link {0} does not exist")]
    NoSuchLink(usize),
    #[error("plaquette {0} does not exist")]
    NoSuchPlaquette(usize),
    #[error("expected {expected} couplings, got {got}")]
    CouplingCount { expected: usize, got: usize },
    #[error("non-finite coupling")]
    NonFiniteCoupling,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("endpoints not reachable: {0}")]
    Unreachable(String),
    #[error("loop is not closed: it excites {0} plaquettes")]
    OpenLoop(usize),
    #[error("exchange geometry invalid: {0}")]
    InvalidExchange(String),
    #[error("register layout invalid: {0}")]
    InvalidLayout(String),
    #[error("projector annihilates the reference state")]
    EmptyProjection,
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("gap undetectable: all {0} eigenvalues fall in one cluster; increase k")]
    GapUndetectable(usize),
    #[error("invalid trap schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
