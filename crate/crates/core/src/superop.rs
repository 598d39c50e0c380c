//! Pauli transfer matrices of linear two-qubit maps.
//!
//! A linear map `Φ` is stored as the real 16×16 matrix
//! `R[(a,b),(c,d)] = ¼ Tr[(σ_a⊗σ_b) Φ(σ_c⊗σ_d)]`, row/column index `4a + b`.
//! Hermiticity-preserving maps have real `R`.

use nalgebra::SMatrix;

use crate::channel::{ChannelParams, KrausSet};
use crate::haar::LocalUnitaryPair;
use crate::operator::{c, pauli, pauli_product, DensityMatrix, Operator2, Operator4};

pub(crate) type Ptm = SMatrix<f64, 16, 16>;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTransferMatrix {
    r: Ptm,
}

fn pauli_basis() -> [Operator4; 16] {
    std::array::from_fn(|k| pauli_product(k / 4, k % 4))
}

/// `½ Tr[σ_a U σ_b U†]`: the 4×4 transfer matrix of `ρ ↦ UρU†` on one qubit.
fn single_qubit_rotation(u: &Operator2) -> SMatrix<f64, 4, 4> {
    let conj: [Operator2; 4] = std::array::from_fn(|b| u * pauli(b) * u.adjoint());
    SMatrix::from_fn(|a, b| 0.5 * (pauli(a) * conj[b]).trace().re)
}

impl PauliTransferMatrix {
    pub fn from_matrix(r: SMatrix<f64, 16, 16>) -> Self {
        Self { r }
    }

    pub fn matrix(&self) -> &SMatrix<f64, 16, 16> {
        &self.r
    }

    /// Transfer matrix of an arbitrary linear map on 4×4 operators.
    pub fn from_linear_map<F>(map: F) -> Self
    where
        F: Fn(&Operator4) -> Operator4,
    {
        let basis = pauli_basis();
        let images: Vec<Operator4> = basis.iter().map(&map).collect();
        Self {
            r: Ptm::from_fn(|row, col| 0.25 * (basis[row] * images[col]).trace().re),
        }
    }

    /// Materializes a black box that only accepts density matrices, using the
    /// probes `I/4` and `¼(I + σ_c⊗σ_d)` and linearity.
    pub fn from_black_box<F>(channel: F) -> Self
    where
        F: Fn(&DensityMatrix) -> DensityMatrix,
    {
        let basis = pauli_basis();
        let quarter = Operator4::identity() * c(0.25);
        let base = channel(&DensityMatrix::new_unchecked(quarter)).into_operator();
        let images: Vec<Operator4> = (0..16)
            .map(|k| {
                if k == 0 {
                    base * c(4.0)
                } else {
                    let probe = quarter + basis[k] * c(0.25);
                    (channel(&DensityMatrix::new_unchecked(probe)).into_operator() - base) * c(4.0)
                }
            })
            .collect();
        Self {
            r: Ptm::from_fn(|row, col| 0.25 * (basis[row] * images[col]).trace().re),
        }
    }

    pub fn from_params(p: &ChannelParams) -> Self {
        let mut r = Ptm::zeros();
        for k in 0..16 {
            r[(k, k)] = p.scale_factor(k / 4, k % 4);
        }
        Self { r }
    }

    pub fn from_kraus(kraus: &KrausSet) -> Self {
        Self::from_linear_map(|op| kraus.apply_operator(op))
    }

    /// Transfer matrix of `ρ ↦ (U₁⊗U₂) ρ (U₁⊗U₂)†`.
    pub fn local_conjugation(pair: &LocalUnitaryPair) -> SMatrix<f64, 16, 16> {
        single_qubit_rotation(&pair.u1).kronecker(&single_qubit_rotation(&pair.u2))
    }

    pub fn apply_operator(&self, op: &Operator4) -> Operator4 {
        let basis = pauli_basis();
        let coeffs: [f64; 16] = std::array::from_fn(|k| (op * basis[k]).trace().re);
        let mut out = Operator4::zeros();
        for (row, b) in basis.iter().enumerate() {
            let w: f64 = (0..16).map(|col| self.r[(row, col)] * coeffs[col]).sum();
            out += b * c(0.25 * w);
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.apply_operator(rho.operator()))
    }

    /// Parameters of the exact twirl of this map: `V`, `X` and `Y` are the
    /// averaged diagonal entries of the `P → P`, `Q → Q` and `M → M` blocks.
    pub fn covariant_projection(&self) -> ChannelParams {
        let mut v = 0.0;
        let mut x = 0.0;
        let mut y = 0.0;
        for i in 1..4 {
            v += self.r[(4 * i, 4 * i)];
            x += self.r[(i, i)];
            for j in 1..4 {
                y += self.r[(4 * i + j, 4 * i + j)];
            }
        }
        ChannelParams::new(v / 3.0, x / 3.0, y / 9.0)
    }
}
