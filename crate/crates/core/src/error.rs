use thiserror::Error;

/// Errors produced by the simulator and its supporting analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("problem document: {0}")]
    Schema(String),

    #[error("monomial has {found} exponents, expected {expected}")]
    ExponentLength { expected: usize, found: usize },

    #[error("non-finite coefficient or bound: {0}")]
    NonFinite(f64),

    #[error("variables need at least 2 values, got d = {0}")]
    DimensionTooSmall(usize),

    #[error("problem needs at least one variable")]
    NoVariables,

    #[error("assignment value {value} at position {position} outside [0, {max}]")]
    AssignmentOutOfRange { position: usize, value: usize, max: usize },

    #[error("assignment has {found} entries, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },

    #[error("basis index {index} outside [0, {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("constraint {index} cannot be normalized: it is unsatisfiable over the variable box")]
    Contradiction { index: usize },

    #[error("register dimension {dimension} exceeds the amplitude cap {cap}")]
    DimensionCap { dimension: u128, cap: usize },

    #[error("qubit pattern has width {found}, register has {expected} qubits")]
    PatternWidth { expected: usize, found: usize },

    #[error("invalid qubit pattern {0:?}")]
    PatternSyntax(String),

    #[error("post-selected pattern has probability {0:e}, below tolerance")]
    ZeroProbability(f64),

    #[error("constraint bound must be positive, got {0}")]
    NonPositiveBound(f64),

    #[error("constraint index {index} out of range for {m} constraints")]
    ConstraintIndex { index: usize, m: usize },

    #[error("layout has {found} qubits but the problem has {expected} constraints")]
    LayoutMismatch { expected: usize, found: usize },

    #[error("probability {0} must lie in (0, 1]")]
    InvalidProbability(f64),

    #[error("cost upper bound {cub} too small: state {y} has cost {cost} and needs C + 1 < C_ub")]
    CostBoundViolation { cub: f64, y: usize, cost: f64 },

    #[error("negative cost {cost} at feasible state {y}")]
    NegativeCost { y: usize, cost: f64 },

    #[error("all feasible costs are zero; the ancilla never reaches |0>")]
    DegenerateObjective,

    #[error("feasible region is empty")]
    Undecidable,

    #[error("QPE register width {0} outside 1..=24")]
    RegisterWidth(usize),

    #[error("enumeration of {size} assignments exceeds cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
