//! Exact arithmetic in SL₂ over F_p and F_{p²}, and its structure theory.

pub mod field;
pub mod sl2;
pub mod structure;

pub use field::{Fp2, PrimeField, QuadExtField};
pub use sl2::{Sl2Group, Sl2ModP};
pub use structure::{classify, common_borel, ElementClass, ElementKind, MaximalTorus};
