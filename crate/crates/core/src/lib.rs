//! Canalization properties of multivalued discrete functions.
//!
//! The crate decides whether a function on a mixed-radix domain is
//! canalizing, nested canalizing (NC), softly nested canalizing (SNC) or
//! weakly nested canalizing (WNC), maps multivalued networks to Boolean ones
//! with the Van Ham encoding, bounds the number of SNC functions, and
//! classifies logical rules of gene-regulation models.

pub mod booleanize;
pub mod canalization;
pub mod counting;
pub mod dataset;
pub mod domain;
pub mod error;
pub mod oracle;
pub mod ruledsl;

pub use booleanize::{
    booleanize, booleanize_function, is_nc_partial, is_nc_partial_with, transport_witness, BoolNcStep, BoolNcWitness,
    BooleanizedNetwork, PartialBooleanFunction, VanHamCodec,
};
pub use canalization::{
    generate_nc, generate_snc, is_canalizing, is_nc, is_nc_with, is_snc, is_softly_canalizing, is_wnc, is_wnc_with,
    snc_witness_from_nc, NcWitness, SearchLimits, Segment, SncStep, SncWitness, WncStep, WncWitness,
};
pub use domain::{IntervalBox, Level, MixedRadixDomain, MultivaluedFunction, Network, Side, SubsetBox, TruthTable};
pub use error::{Error, Result};

/// Exact non-negative integer used for function counts.
pub type BigCount = num_bigint::BigUint;

/// Exact ratio of two counts.
pub type BigRatio = num_rational::BigRational;
