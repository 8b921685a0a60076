pub mod certified;
pub mod cli;
pub mod constants;
pub mod error;
pub mod freegrp;
pub mod groups;
pub mod growth;
pub mod harness;
pub mod setcalc;
pub mod spectral;
pub mod walks;

pub use error::{Error, Result};
