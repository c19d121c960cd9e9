use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one CLI exit class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not in the dual lattice: {0}")]
    NotDualLattice(String),
    #[error("subgroups live in different forms")]
    MismatchedForms,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("subgroup is not self-dual isotropic")]
    NotSelfDualIsotropic,
    #[error("vector is not invariant under the Weil representation")]
    NotInvariant,
    #[error("size guard exceeded: {what} needs {needed}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: u64,
        limit: u64,
    },
    #[error("unsupported eta factor: {0}")]
    UnsupportedFactor(String),
    #[error("invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
