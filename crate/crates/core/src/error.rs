use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed shapes, configurations or maps.
    #[error("shape error: {0}")]
    Shape(String),
    /// `d ∘ d` failed to vanish on the named basis element.
    #[error("integrity error: d² ≠ 0 on basis element {label} (degree {degree})")]
    Integrity { label: String, degree: i32 },
    #[error("incomplete window: degree {degree} requires a basis in degree {missing}")]
    IncompleteWindow { degree: i32, missing: i32 },
    #[error("not a chain map: {witness}")]
    ChainMap { witness: String },
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
