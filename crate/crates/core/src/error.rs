use thiserror::Error;

/// A violated structural constraint on ring, exponent or code parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("modulus p={0} must be odd and at least 3")]
    BadModulus(usize),
    #[error("mismatched moduli: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("shift {d} is zero modulo p={p}")]
    ZeroShift { d: i64, p: usize },
    #[error("shift {d} is not coprime to p={p}")]
    ShiftNotCoprime { d: i64, p: usize },
    #[error("exponents {a} and {b} differ by a value not coprime to p={p}")]
    ExponentsNotCoprime { a: usize, b: usize, p: usize },
    #[error("k and r must be positive (k={k}, r={r})")]
    EmptyCode { k: usize, r: usize },
    #[error("p={p} is smaller than required bound {bound}")]
    ModulusTooSmall { p: usize, bound: usize },
    #[error("g has {got} entries, expected {expected}")]
    GLength { expected: usize, got: usize },
    #[error("g entry {value} is not below p={p}")]
    GOutOfRange { value: usize, p: usize },
    #[error("g entry {0} appears more than once")]
    GRepeated(usize),
    #[error("g entry {value} exceeds the MDS-mode bound {bound}")]
    GAboveMdsBound { value: usize, bound: usize },
    #[error("2 is not a primitive element modulo p={0}")]
    TwoNotPrimitive(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("determinant is not invertible modulo M_p(x)")]
    Singular,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(#[from] ParamError),
    /// Data that cannot be in the image of the map being inverted.
    #[error("input error: {0}")]
    Input(String),
    #[error("unrecoverable erasure pattern: {0}")]
    Unrecoverable(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param(_) | Error::Input(_) => 2,
            Error::Unrecoverable(_) => 3,
            Error::Format(_) | Error::Io(_) => 4,
        }
    }

    /// Short machine-readable tag for the error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Param(_) => "parameter",
            Error::Input(_) => "input",
            Error::Unrecoverable(_) => "unrecoverable",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
