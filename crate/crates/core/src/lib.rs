//! Covariant two-qubit quantum channels and optimal quantum NOT operations.
//!
//! The crate is organized bottom-up:
//!
//! * [`operator`]: 2×2 / 4×4 complex operator algebra in the computational
//!   basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` (with `↑ = (1, 0)`), density matrices,
//!   the coherence-vector parameterization, the magic basis and concurrence.
//! * [`eigen`]: cyclic Jacobi diagonalization of small Hermitian matrices.
//! * [`channel`]: the three-parameter family `Π_{V,X,Y}` of channels commuting
//!   with every local unitary `U₁ ⊗ U₂`; Kraus and Choi forms, complete
//!   positivity, convex decomposition and parameter extraction.
//! * [`unot`]: the NOT error measure, optimal and perfect NOT operations.
//! * [`haar`]: Haar sampling on SU(2), covariance checks and twirling.

pub mod channel;
pub mod eigen;
mod error;
pub mod haar;
pub mod operator;
pub mod superop;
pub mod unot;

pub use channel::{
    apply, apply_kraus, choi_matrix, convex_decompose, cp_check, extract_params, kraus_set,
    ChannelParams, ChoiMatrix, ConvexWeights, CpReport, Extraction, KrausSet,
};
pub use error::{Error, Result};
pub use haar::{check_covariance, haar_su2, twirl, LocalUnitaryPair, RngState, TwirlResult};
pub use operator::{
    concurrence, from_coherence_form, random_pure_state, tensor_product, to_coherence_form,
    CoherenceForm, DensityMatrix, Operator2, Operator4, PureState,
};
pub use superop::PauliTransferMatrix;
pub use unot::{
    covariant_error, distance_to_complement, min_distance_oracle, numerical_optimal_not,
    optimal_not, perfect_not_magic, EntanglementClass, ErrorReport, MagicNotOperator, NotFamily,
    OptimalFamily,
};

/// Tolerance for Hermiticity, trace and positivity checks on 4×4 operators.
pub const STATE_TOL: f64 = 1e-10;

/// Margins of the complete-positivity inequalities at or above `-CP_TOL`
/// count as satisfied, so boundary channels validate.
pub const CP_TOL: f64 = 1e-10;
