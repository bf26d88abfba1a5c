use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row lengths must be positive and weakly decreasing, got {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("box ({x},{y}) is not contained in the partition")]
    BoxOutside { x: i64, y: i64 },
    #[error("residue modulus must be positive, got {0}")]
    InvalidModulus(i64),
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid torsion order {0}: torsion orders are 0 or at least 2")]
    InvalidTorsion(i64),
    #[error("cycle index {0} out of range 1..={1}")]
    CycleOutOfRange(usize, usize),
    #[error("bridge index {0} out of range 1..={1}")]
    BridgeOutOfRange(usize, usize),
    #[error("points lie on different cycles: {0} vs {1}")]
    CycleMismatch(usize, usize),
    #[error("label {label} at box ({x},{y}) is outside the alphabet 1..={g}")]
    LabelOutOfRange { label: u32, x: i64, y: i64, g: u32 },
    #[error("label rows do not match the tableau shape")]
    LabelShapeMismatch,
    #[error("expected {expected} residue sets, got {got}")]
    ResidueSetCount { expected: usize, got: usize },
    #[error("box ({x},{y}) has label {label} but its diagonal {diag} is not in the residue set for that label")]
    DiagonalNotCovered { x: i64, y: i64, label: u32, diag: i64 },
    #[error("expected a divisor of degree 1 on cycle {cycle}, got degree {degree}")]
    WrongCycleDegree { cycle: usize, degree: i64 },
    #[error("term multiplicities must be nonzero")]
    ZeroMultiplicity,
    #[error("the chip-firing oracle needs a metric chain")]
    OracleNeedsMetric,
    #[error("invalid arguments: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
