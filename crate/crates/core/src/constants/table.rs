//! Numerical constants of the expansion argument, in one place.

/// Helfgott growth exponent δ = 1/3024: |H³| ≥ |H|^{1+δ} unless H³ = G.
pub const HELFGOTT_DELTA_DEN: u64 = 3024;

/// Sharper growth exponent 1/1512, valid for large H.
pub const SHARP_DELTA_DEN: u64 = 1512;

/// log₂ c₁ for the energy-to-approximate-subgroup constants β_i ≤ c₁|G|^{c₂δ₀}.
pub const C1_LOG2: u64 = 2424;

/// c₂ in β_i ≤ c₁|G|^{c₂δ₀}.
pub const C2: u64 = 937;

/// log₂ c₃, with c₃ ≤ 2¹⁴c₁ the flattening constant.
pub const C3_LOG2: u64 = 2438;

/// Proper subgroups of SL₂(F_p) failing the two-step commutator relation have
/// at most this many elements (p ≥ 5).
pub const DICKSON_SMALL: u64 = 120;

/// γ = γ_raw / 2⁹ in the non-concentration estimate.
pub const GAMMA_SHIFT: u32 = 9;

/// Lemma bound γ ≤ 2⁻⁵.
pub const GAMMA_MAX_LOG2: i64 = -5;

/// Walk length constant: k ≤ c log|G| with c = 1/96.
pub const WALK_C_DEN: u64 = 96;

/// Representation-dimension exponent d with mdim ≥ |G|^d, taken as 1/4.
pub const D_DEN: u64 = 4;

/// The stated bound j ≤ 48060000 γ⁻¹ on the number of flattening steps.
pub const J_STATED_NUM: u64 = 48_060_000;

/// Stated exponent 2³⁵ in λ₁ ≥ 2^{−2³⁵/γ_raw}.
pub const GAP_EXPONENT_LOG2: u32 = 35;

/// Exponent in the Babai-type diameter bound 3 (log|G|)^C.
pub const BABAI_C: u64 = 3323;

/// Smallest dimension of a non-trivial representation of SL₂(F_p), p ≥ 3.
pub fn min_nontrivial_dim(p: u64) -> u64 {
    (p - 1) / 2
}
