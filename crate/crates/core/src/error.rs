use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("no feasible bundle exists")]
    Infeasible,
    #[error("resource limit exceeded: {required} units needed, cap is {cap}")]
    ResourceLimit { required: u128, cap: u128 },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("no witness found within the search bounds")]
    NotFound,
}
