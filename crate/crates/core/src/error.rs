use thiserror::Error;

use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("cannot parse ring spec: unexpected token `{token}` ({reason})")]
    RingSpecParse { token: String, reason: &'static str },

    #[error("cannot parse element `{token}` of {spec}: {reason}")]
    ElementParse {
        spec: RingSpec,
        token: String,
        reason: &'static str,
    },

    #[error("ring mismatch: {left} vs {right}")]
    SpecMismatch { left: RingSpec, right: RingSpec },

    #[error("{0} is not a unit")]
    NonUnit(String),

    #[error("no canonical surjection from {source_spec} onto {target_spec}")]
    IncompatibleSpecs {
        source_spec: RingSpec,
        target_spec: RingSpec,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration cap exceeded: {needed} > {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("element does not belong to this group presentation")]
    BasisMismatch,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GwError>;
