use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u32),
    /// `n` was zero, or a supplied modulus does not have degree `n`.
    DegreeMismatch { expected: u32, found: usize },
    /// Modulus is not monic or has a coefficient outside `[0, p)`.
    InvalidModulus,
    ReducibleModulus,
    /// `p^n` exceeds `2^max_bits`.
    FieldTooLarge { p: u32, n: u32, max_bits: u32 },
    DivisionByZero,
    /// An element or table does not belong to the field it was used with.
    FieldMismatch,
    NotADivisor { k: u32, n: u32 },
    CodomainViolation,
    DomainMismatch,
    ZeroLambda,
    GammaZero,
    BNotInSubfield,
    ConditionNotMet,
    LNotPermutation,
    WitnessInvalid,
    KTooSmall,
    NuInvalid,
    BNonzero,
    GammaConditionFailed,
    LambdaForbidden,
    InvariantViolation(&'static str),
    ImageEscapesS,
    PreconditionFailed(&'static str),
    DeltaNotInS,
    HNotSubfieldValued,
    InvalidParameter(&'static str),
    UnknownFamily,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::InvalidModulus => f.write_str("modulus must be monic with coefficients in [0, p)"),
            Error::ReducibleModulus => f.write_str("modulus is reducible"),
            Error::FieldTooLarge { p, n, max_bits } => {
                write!(f, "field {p}^{n} exceeds the size cap of 2^{max_bits} elements")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::FieldMismatch => f.write_str("operand does not belong to this field"),
            Error::NotADivisor { k, n } => write!(f, "{k} does not divide {n}"),
            Error::CodomainViolation => f.write_str("value escapes the declared codomain"),
            Error::DomainMismatch => f.write_str("tables are not composable"),
            Error::ZeroLambda => f.write_str("lambda must be nonzero"),
            Error::GammaZero => f.write_str("gamma must be nonzero"),
            Error::BNotInSubfield => f.write_str("b is not in the subfield"),
            Error::ConditionNotMet => f.write_str("gamma does not satisfy the quadratic trace condition"),
            Error::LNotPermutation => f.write_str("linear map is not a permutation"),
            Error::WitnessInvalid => f.write_str("translator witness does not verify"),
            Error::KTooSmall => f.write_str("construction requires r > 1 and k > 1"),
            Error::NuInvalid => f.write_str("nu must lie in GF(2^m) \\ {0, 1}"),
            Error::BNonzero => f.write_str("translator constant b must be zero"),
            Error::GammaConditionFailed => f.write_str("gamma fails the 0-translator conditions"),
            Error::LambdaForbidden => f.write_str("lambda = -1/b makes u + b*h(u) degenerate"),
            Error::InvariantViolation(what) => write!(f, "internal invariant violated: {what}"),
            Error::ImageEscapesS => f.write_str("reduced map leaves the trace-kernel subspace"),
            Error::PreconditionFailed(what) => write!(f, "precondition failed: {what}"),
            Error::DeltaNotInS => f.write_str("delta must be a nonzero element of the trace kernel"),
            Error::HNotSubfieldValued => f.write_str("h must take nonzero subfield values on the kernel"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::UnknownFamily => f.write_str("unknown construction family"),
        }
    }
}

impl core::error::Error for Error {}
