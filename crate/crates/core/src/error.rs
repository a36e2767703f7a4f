use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element {element} is a loop")]
    Loop { element: usize },

    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("basis has {actual} elements in flat but the flat has rank {rank}; full intersection required")]
    FullIntersectionRequired { actual: usize, rank: usize },

    #[error("flat {flat} is not covered by the family")]
    NotHittingFamily { flat: String },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
