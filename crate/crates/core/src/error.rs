use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),

    #[error("field order {p}^{m} exceeds the supported maximum of {max}")]
    FieldTooLarge { p: u32, m: u32, max: u32 },

    #[error("modulus {0:?} is not a monic polynomial of the requested degree")]
    InvalidModulus(Vec<u32>),

    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),

    #[error("element {0} is not a primitive element")]
    NotPrimitive(u32),

    #[error("operands belong to different algebraic structures")]
    MismatchedDescriptor,

    #[error("element index {index} out of range for a structure of size {size}")]
    ElementOutOfRange { index: u64, size: u64 },

    #[error("zero has no discrete logarithm")]
    ZeroLogarithm,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "quadratic-phase bases need odd characteristic; gcd(2, q) = 2 for p = 2 \
         (use the Galois-ring construction for qubits)"
    )]
    CharacteristicTwo,

    #[error("{0} is not a Teichmüller element")]
    NotTeichmuller(u32),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
