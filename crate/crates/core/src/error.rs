use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("block mismatch")]
    BlockMismatch,
    /// An internal consistency check failed; always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotFiniteType(_) => "not_finite_type",
            Error::PairingMismatch(_) => "pairing_mismatch",
            Error::Guard(_) => "guard",
            Error::Precondition(_) => "precondition",
            Error::ModulusMismatch(..) => "modulus_mismatch",
            Error::BlockMismatch => "block_mismatch",
            Error::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
