use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole of order {order} at q = {at}")]
    Pole { at: String, order: u32 },
    #[error("specialization at q = 0 is not allowed")]
    ZeroSpecialization,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported root system type `{0}`")]
    UnsupportedType(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("weight {0:?} is not in the root lattice")]
    NotInRootLattice(Vec<i64>),
    #[error("zero matrix has no content")]
    ZeroContent,
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("size budget exceeded: {0}")]
    Budget(String),
    #[error("unexpected dimension for {what}: expected {expected}, found {found}")]
    Dimension { what: String, expected: usize, found: usize },
    #[error("check failed: {0}")]
    Check(String),
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
