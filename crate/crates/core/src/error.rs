use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("extended gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("residue ring moduli differ")]
    ModulusMismatch,

    #[error("element is a zero divisor in the residue ring and has no inverse")]
    NonInvertible,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Quot scheme has positive dimension eps={eps}; Holla formula inapplicable")]
    DimensionPositive { eps: i64 },

    #[error("sign exponent {0} is not an integer")]
    NonIntegerSign(String),

    #[error("root-of-unity sum did not reduce to a rational constant: {0}")]
    NonRationalResult(String),

    #[error("degree evaluated to the non-integer {0}")]
    NonIntegralResult(String),

    #[error("brute-force oracle limited to n <= {cap}, got n = {n}")]
    CapExceeded { n: i64, cap: i64 },

    #[error("brute-force sum has imaginary part {imag:e} against real part {real:e}")]
    ImaginaryResidue { real: f64, imag: f64 },

    #[error("cross-path mismatch: {0}")]
    CrossPathMismatch(String),

    #[error("interpolated polynomial failed verification: {0}")]
    VerificationFailed(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::CapExceeded { .. } => 2,
            Error::DimensionPositive { .. } => 3,
            _ => 4,
        }
    }
}
