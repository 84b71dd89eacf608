//! Error type shared by all modules.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("input matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NonHermitianInput(f64),
    #[error("matrix has a negative eigenvalue {0:.3e} beyond tolerance")]
    NegativeEigenvalue(f64),
    #[error("SVD failed to converge; condition estimate {0:.3e}")]
    ConvergenceFailure(f64),
    #[error("Kronecker product dimensions {0}x{1} exceed the configured cap")]
    DimensionOverflow(usize, usize),
    #[error("|rho| = {0} exceeds 1")]
    InvalidRho(f64),
    #[error("cannot place {0} users into {1} narrowbands")]
    BandOverflow(usize, usize),
    #[error("q = {q} is not a multiple of p = {p}")]
    IndivisibleRatio { p: usize, q: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("antenna index range out of bounds: i={i}, j={j}, r={r}, m={m}")]
    IndexOutOfRange { i: usize, j: usize, r: i64, m: usize },
    #[error("no segments supplied")]
    EmptySegments,
    #[error("no nonzero shift exists for i=1, j=M")]
    NoShiftAvailable,
    #[error("all singular values below the numeric floor")]
    DegenerateSpectrum,
    #[error("shift r={r} outside the valid range for i={i}, j={j}")]
    ShiftOutOfRange { i: usize, j: usize, r: i64 },
    #[error("|rho| = 1: closed form is singular; only the oracle is defined")]
    RhoAtUnity,
    #[error("rho = 0: bound formulas are undefined; the singular value is 0")]
    RhoZero,
    #[error("cannot reshape a length-{len} vector into {rows}x{cols}")]
    ReshapeMismatch { len: usize, rows: usize, cols: usize },
    #[error("selected atoms are numerically dependent (condition {0:.3e})")]
    SingularProjection(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
