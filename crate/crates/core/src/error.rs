use alloc::string::String;

use crate::chain::Chain;
use crate::oriental::Violation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operator has no values")]
    EmptyOperator,
    #[error("dimension exceeds the supported maximum")]
    TooLarge,
    #[error("value {value} exceeds target {target}")]
    ValueOutOfRange { value: usize, target: usize },
    #[error("values are not weakly increasing")]
    NotMonotone,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("chain is zero")]
    ZeroChain,
    #[error("not composable: left face {left} differs from right face {right}")]
    NotComposable { left: Chain, right: Chain },
    #[error("not a member of O: {0}")]
    NotMember(Violation),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
