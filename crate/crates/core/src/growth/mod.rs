//! Verifiers for the growth statements in SL₂(F_p): escape, non-concentration,
//! the torus dichotomy, Pink's fiber classification, quasirandomness and the
//! tripling lower bound itself.

pub mod checks;
pub mod pink;
pub mod sample;

pub use checks::{
    babai_check, dichotomy_check, escape_check, escape_sharpness_search, helfgott_check,
    helfgott_check_with, nonconcentration_check, orbit_stabilizer_check, qr_check, subkey_check,
    GrowthCase, GrowthVerdict, DELTA_DEN,
};
pub use pink::{pink_exhaustive, pink_fiber, FiberRecord, PinkCase};
pub use sample::{sample_generating, sample_symmetric, SampleKind};
