//! Product-set combinatorics over arbitrary finite groups.

pub mod approx;
pub mod energy;
pub mod group;
pub mod products;
pub mod ruzsa;
pub mod subset;

pub use group::{CyclicGroup, DihedralGroup, FiniteGroup, TableGroup, UnitGroup};
pub use subset::GroupSubset;
pub use approx::{approx_from_tripling, energy_to_approx, tao_symmetry_set, th46_construct, ApproxGroupWitness};
pub use energy::{energy, EnergyCertificate};
pub use ruzsa::{ruzsa_cover, ruzsa_distance, CoverSide, RuzsaDistance};
