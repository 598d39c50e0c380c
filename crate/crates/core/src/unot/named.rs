use crate::channel::{ChannelParams, KrausSet};
use crate::operator::{c, pauli_product, tensor_product, Operator2, Operator4};
use crate::{Error, Result};

/// `U_SEP = u¹ ⊗ u¹ = (−1/3, −1/3, 1/9)`.
pub fn u_sep() -> ChannelParams {
    ChannelParams::new(-1.0 / 3.0, -1.0 / 3.0, 1.0 / 9.0)
}

/// `G_NOT(ρ) = (4I − ρ)/15`, i.e. `X = V = Y = −1/15`.
pub fn g_not() -> ChannelParams {
    ChannelParams::new(-1.0 / 15.0, -1.0 / 15.0, -1.0 / 15.0)
}

fn check_ume(v: f64) -> Result<()> {
    if !(-1.0 / 3.0..=1.0).contains(&v) {
        return Err(Error::ParameterOutOfRange {
            name: "V",
            value: v,
        });
    }
    Ok(())
}

/// Perfect covariant NOT for maximally entangled inputs, `(V, 2/3 − V, −1/3)`.
pub fn u_me(v: f64) -> Result<ChannelParams> {
    check_ume(v)?;
    Ok(ChannelParams::new(v, 2.0 / 3.0 - v, -1.0 / 3.0))
}

/// Kraus form of [`u_me`]: weight `(1 − V)/4` on each `σᵢ⊗I` and
/// `(1/3 + V)/4` on each `I⊗σᵢ`.
pub fn u_me_kraus(v: f64) -> Result<KrausSet> {
    check_ume(v)?;
    ume_terms((1.0 - v) / 4.0, (1.0 / 3.0 + v) / 4.0)
}

/// The alternative labeling with the two weights exchanged; it realizes
/// `(2/3 − V, V, −1/3)` rather than `u_me(V)`.
pub fn u_me_kraus_display_labeling(v: f64) -> Result<KrausSet> {
    check_ume(v)?;
    ume_terms((1.0 / 3.0 + v) / 4.0, (1.0 - v) / 4.0)
}

fn ume_terms(first: f64, second: f64) -> Result<KrausSet> {
    let mut terms = Vec::with_capacity(6);
    for i in 1..4 {
        terms.push((first, pauli_product(i, 0)));
        terms.push((second, pauli_product(0, i)));
    }
    KrausSet::new(terms)
}

/// Optimal single-qubit universal NOT `u¹(ρ) = (2I − ρ)/3`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OneQubitNot;

impl OneQubitNot {
    /// Linear on all 2×2 operators: `u¹(A) = (2 Tr(A) I − A)/3`.
    pub fn apply(&self, rho: &Operator2) -> Operator2 {
        (Operator2::identity() * (rho.trace() * 2.0) - rho) * c(1.0 / 3.0)
    }

    /// `u¹(ρ_a) ⊗ u¹(ρ_b)`.
    pub fn apply_product(&self, rho_a: &Operator2, rho_b: &Operator2) -> Operator4 {
        tensor_product(&self.apply(rho_a), &self.apply(rho_b))
    }
}
