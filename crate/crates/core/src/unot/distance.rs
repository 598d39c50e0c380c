use nalgebra::{DMatrix, Matrix4x3};
use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::haar::RngState;
use crate::operator::{c, random_pure_state, DensityMatrix, Ket4, Operator4, PureState};
use crate::Result;

/// `D(ρ|φ⊥) = 2⟨φ|ρ²|φ⟩ − (2/3)⟨φ|ρ|φ⟩²`, the squared Hilbert-Schmidt
/// distance from `ρ` to the nearest state supported on `φ⊥`.
pub fn distance_to_complement(rho: &DensityMatrix, phi: &PureState) -> f64 {
    let v = rho.operator() * phi.amplitudes();
    let second = v.norm_squared();
    let first = phi.amplitudes().dotc(&v).re;
    2.0 * second - 2.0 / 3.0 * first * first
}

/// Orthonormal basis of `φ⊥` by Gram-Schmidt on the computational vectors.
fn complement_basis(phi: &PureState) -> Matrix4x3<Complex64> {
    let mut found: Vec<Ket4> = vec![*phi.amplitudes()];
    for k in 0..4 {
        let mut v = Ket4::zeros();
        v[k] = c(1.0);
        for u in &found {
            v -= u * u.dotc(&v);
        }
        let n = v.norm();
        if n > 0.5 {
            found.push(v / c(n));
        }
        if found.len() == 4 {
            break;
        }
    }
    Matrix4x3::from_columns(&[found[1], found[2], found[3]])
}

/// Independent evaluation of `min_σ Tr(ρ − σ)²` over states `σ` on `φ⊥`.
///
/// Builds the basis `{φ, φ₁, φ₂, φ₃}` in which the `φ⊥` block of `ρ` is
/// diagonal with entries `βᵢ`, places the minimizer at
/// `σ = Σ (βᵢ + ⟨φ|ρ|φ⟩/3) |φᵢ⟩⟨φᵢ|` and evaluates the trace distance
/// directly. Degenerate blocks are fine: any eigenbasis gives the same value.
pub fn min_distance_oracle(rho: &DensityMatrix, phi: &PureState) -> f64 {
    let q = complement_basis(phi);
    let block = q.adjoint() * rho.operator() * q;
    let e = hermitian_eigen(&DMatrix::from_fn(3, 3, |r, col| block[(r, col)]));
    let lambda1 = phi
        .amplitudes()
        .dotc(&(rho.operator() * phi.amplitudes()))
        .re;

    let mut sigma = Operator4::zeros();
    for i in 0..3 {
        let coeffs = e.vectors.column(i);
        let phi_i: Ket4 = (0..3).map(|k| q.column(k) * coeffs[k]).sum();
        let weight = e.values[i] + lambda1 / 3.0;
        sigma += phi_i * phi_i.adjoint() * c(weight);
    }
    let diff = rho.operator() - sigma;
    (diff * diff).trace().re
}

/// Estimate of `sup_{φ ∈ Ω_α} D(Π(|φ⟩⟨φ|)|φ⊥)` for an arbitrary black box,
/// as the maximum over `samples` random members of the class.
pub fn sampled_error<F>(channel: F, alpha: f64, samples: usize, rng: &mut RngState) -> Result<f64>
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let phi = random_pure_state(alpha, rng)?;
        let out = channel(&DensityMatrix::from_pure(&phi));
        worst = worst.max(distance_to_complement(&out, &phi));
    }
    Ok(worst)
}
