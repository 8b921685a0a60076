//! Exact random walks on Cayley graphs of SL₂(F_p) and the estimates built on them.

pub mod adhoc;
pub mod decay;
pub mod dickson;
pub mod dist;
pub mod flatten;

pub use adhoc::{adhoc_ball_count, AdhocReport};
pub use decay::{decay_inequality_eval, gamma1, tree_agreement, DecayReport};
pub use dickson::{dickson_classify, random_subgroups, DicksonCase, DicksonReport};
pub use dist::{walk, walk_sequence, WalkDistribution};
pub use flatten::{flattening_identities_check, FlatteningReport};
