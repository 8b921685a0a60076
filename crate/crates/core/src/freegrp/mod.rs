//! Free groups: reduced words, balls, integer matrix images and the tree walk.

pub mod genset;
pub mod tree;
pub mod words;

pub use genset::{injectivity_check, norm_log, GenSetZ, Sl2Int};
pub use tree::kesten_bound_check;
pub use words::{Ball, Sl2Word};
