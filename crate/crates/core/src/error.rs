use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace {0} differs from 1")]
    InvalidTrace(f64),

    #[error("operator has negative eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("entanglement parameter alpha = {0} outside [0, 1/sqrt(2)]")]
    AlphaOutOfRange(f64),

    #[error("{name} = {value} outside its admissible range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("channel is not completely positive (margins {margins:?})")]
    NotCompletelyPositive { margins: [f64; 4] },

    #[error("black box is not a covariant channel (residual {residual:.3e} > {tol:.1e})")]
    NotCovariant { residual: f64, tol: f64 },

    #[error("Kraus set is not trace preserving (residual {0:.3e})")]
    NotTracePreserving(f64),

    #[error("NOT coefficient vector has norm {0}, expected 1")]
    NonUnitNorm(f64),

    #[error("U and V coefficient families are both nonzero")]
    MixedFamilies,
}
