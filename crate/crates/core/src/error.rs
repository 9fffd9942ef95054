use crate::qalgebra::Partition;

/// Errors raised by the library and the `qjd` command-line tool.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error(
        "cannot lift a polynomial of degree {degree} in {n_vars} variables to degree bound {bound}"
    )]
    Lift {
        degree: usize,
        bound: usize,
        n_vars: usize,
    },

    #[error("eigenvalue collision: {target} and {other} share the eigenvalue {value}")]
    EigenvalueCollision {
        target: Partition,
        other: Partition,
        value: String,
    },

    #[error("interpolation failure: {0}")]
    Interpolation(String),

    #[error("singular linear system")]
    Singular,

    #[error("invalid state: {0}")]
    State(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("detailed balance fails on edge {from} -> {to}")]
    CycleCondition { from: String, to: String },

    #[error("stability violation for {lambda} at level {level}")]
    Stability { lambda: Partition, level: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
