use thiserror::Error;

use crate::config::Violation;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid configuration: {}", join(.0))]
    InvalidConfig(Vec<Violation>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot aggregate an empty set of runs")]
    EmptyRunSet,
    #[error("runs differ in length: {0} vs {1}")]
    RunLengthMismatch(usize, usize),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
