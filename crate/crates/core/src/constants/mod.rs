//! Explicit constants: spectral-gap exponent, thresholds on p, diameter and
//! Babai constants, all as certified enclosures.

pub mod bounds;
pub mod table;

pub use bounds::{
    babai_constant, compute_gamma, compute_tau_inv, diameter_bound, flattening_delta1, gap_bound, transfer_expansion,
    BoundReport, Enclosure, REPORT_SCHEMA,
};
