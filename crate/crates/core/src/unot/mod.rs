//! Quantum NOT operations for pure two-qubit states of fixed entanglement.
//!
//! The error of a channel on input `φ` is the Hilbert-Schmidt distance from
//! its output to the closest state supported on `φ⊥`; for covariant channels
//! it depends only on the class `Ω_α` of `φ` and on `(Z = V + X, Y)`.

mod distance;
mod magic;
mod named;
mod numerical;
mod optimal;

pub use distance::{distance_to_complement, min_distance_oracle, sampled_error};
pub use magic::{
    magic_algebra_check, perfect_not_from_components, perfect_not_magic, AlgebraReport,
    MagicNotOperator, NotFamily, RelationCheck, U_MATRICES, V_MATRICES,
};
pub use named::{g_not, u_me, u_me_kraus, u_me_kraus_display_labeling, u_sep, OneQubitNot};
pub use numerical::{numerical_optimal_not, numerical_optimal_not_with, GridOptions};
pub use optimal::{
    alpha_0, alpha_max, covariant_error, optimal_not, EntanglementClass, ErrorReport, OptimalFamily,
};
