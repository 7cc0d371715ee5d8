use core::fmt;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Amplitude vector has (numerically) zero norm.
    Unnormalizable,
    /// Amplitude vector length is not a power of two ≥ 2.
    NotPowerOfTwo { len: usize },
    /// Fixture state requested below its minimum qubit count.
    QubitCountTooSmall { min: u32, got: u32 },
    /// Subset of qubit labels is empty.
    EmptySubset,
    /// Subset labels must be strictly increasing (1-based, no duplicates).
    UnsortedSubset,
    /// A qubit label exceeds the number of qubits.
    LabelOutOfRange { label: u32, n: u32 },
    /// Two-copy oracle limit: the explicit projector route is capped.
    TwoCopyOracleLimit { n: u32, cap: u32 },
    /// The 4^s SIC outcome table would exceed the configured cap.
    SicTableCap { s: u32, cap: u32 },
    /// Operands live on incompatible qubit counts or subset sizes.
    DimensionMismatch,
    /// A shot/unitary budget violates an estimator precondition.
    InvalidBudget(&'static str),
    /// A numeric parameter is outside its valid range.
    InvalidParam(&'static str),
    /// Exhaustive enumeration was requested beyond its feasibility cap.
    InfeasibleEnumeration(&'static str),
    /// Per-string counts are inconsistent with the stated shot count.
    InvalidCounts(&'static str),
    /// Design-check weights must be non-negative and sum to one.
    NonNormalizedWeights,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Unnormalizable => write!(f, "unnormalizable: amplitude vector has zero norm"),
            Error::NotPowerOfTwo { len } => {
                write!(f, "amplitude vector length {len} is not a power of two >= 2")
            }
            Error::QubitCountTooSmall { min, got } => {
                write!(f, "qubit count {got} below minimum {min}")
            }
            Error::EmptySubset => write!(f, "subset of qubit labels must be non-empty"),
            Error::UnsortedSubset => {
                write!(f, "subset labels must be strictly increasing with no duplicates")
            }
            Error::LabelOutOfRange { label, n } => {
                write!(f, "qubit label {label} out of range for n = {n}")
            }
            Error::TwoCopyOracleLimit { n, cap } => {
                write!(f, "two-copy oracle limit: n = {n} exceeds cap {cap}")
            }
            Error::SicTableCap { s, cap } => {
                write!(f, "SIC outcome table cap: s = {s} exceeds cap {cap}")
            }
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::InvalidBudget(msg) => write!(f, "invalid budget: {msg}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InfeasibleEnumeration(msg) => write!(f, "infeasible enumeration: {msg}"),
            Error::InvalidCounts(msg) => write!(f, "invalid counts: {msg}"),
            Error::NonNormalizedWeights => {
                write!(f, "weights must be non-negative and sum to 1")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
