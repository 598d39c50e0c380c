//! Two-qubit operator algebra.
//!
//! Every 4×4 matrix in this crate is written in the computational basis
//! ordered `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`, with `|↑⟩ = (1, 0)ᵀ`; index
//! `2·a + b` is the basis vector whose first qubit is `a` and second `b`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::eigen::hermitian_eigen;
use crate::haar::{haar_su2, RngState};
use crate::{Error, Result, STATE_TOL};

pub type Operator2 = Matrix2<Complex64>;
pub type Operator4 = Matrix4<Complex64>;
pub type Ket4 = Vector4<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity2() -> Operator2 {
    Operator2::identity()
}

pub fn sigma_x() -> Operator2 {
    Operator2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Operator2 {
    Operator2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Operator2 {
    Operator2::new(ONE, ZERO, ZERO, -ONE)
}

/// `σ₀ = I, σ₁ = σ_x, σ₂ = σ_y, σ₃ = σ_z`.
pub fn pauli(index: usize) -> Operator2 {
    match index {
        0 => identity2(),
        1 => sigma_x(),
        2 => sigma_y(),
        3 => sigma_z(),
        _ => panic!("Pauli index {index} out of range 0..4"),
    }
}

/// Kronecker product `a ⊗ b`: `(a⊗b)[2i+k, 2j+l] = a[i,j]·b[k,l]`.
pub fn tensor_product(a: &Operator2, b: &Operator2) -> Operator4 {
    Operator4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `σ_a ⊗ σ_b` with the indexing of [`pauli`].
pub fn pauli_product(a: usize, b: usize) -> Operator4 {
    tensor_product(&pauli(a), &pauli(b))
}

pub(crate) fn to_dynamic(op: &Operator4) -> DMatrix<Complex64> {
    DMatrix::from_fn(4, 4, |r, col| op[(r, col)])
}

pub(crate) fn hermiticity_defect(op: &Operator4) -> f64 {
    (op - op.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Operator4, b: &Operator4) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Ascending eigenvalues of the Hermitian part of a 4×4 operator.
pub fn eigenvalues4(op: &Operator4) -> [f64; 4] {
    let e = hermitian_eigen(&to_dynamic(op));
    [e.values[0], e.values[1], e.values[2], e.values[3]]
}

/// A two-qubit density operator: Hermitian, unit trace, positive
/// semidefinite (all within [`STATE_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator4,
}

impl DensityMatrix {
    pub fn new(op: Operator4) -> Result<Self> {
        if op.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let herm = hermiticity_defect(&op);
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = op.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = eigenvalues4(&op)[0];
        if min < -STATE_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { op })
    }

    /// Wraps an operator the caller already knows to be a valid state,
    /// e.g. the output of a completely positive trace-preserving map.
    pub fn new_unchecked(op: Operator4) -> Self {
        Self { op }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            op: Operator4::identity() * c(0.25),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            op: psi.projector(),
        }
    }

    pub fn operator(&self) -> &Operator4 {
        &self.op
    }

    pub fn into_operator(self) -> Operator4 {
        self.op
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &Operator4) -> Self {
        Self {
            op: u * self.op * u.adjoint(),
        }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        (psi.amplitudes().adjoint() * self.op * psi.amplitudes())[(0, 0)].re
    }
}

/// A normalized two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Ket4,
}

impl PureState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amps: Ket4) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Normalizes `amps`; fails on the zero vector or non-finite input.
    pub fn normalized(amps: Ket4) -> Result<Self> {
        let norm = amps.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            amps: amps / c(norm),
        })
    }

    /// Computational basis state `index` (0 = `|↑↑⟩`, …, 3 = `|↓↓⟩`).
    pub fn basis(index: usize) -> Self {
        let mut amps = Ket4::zeros();
        amps[index] = ONE;
        Self { amps }
    }

    /// `α|↑↑⟩ + β|↓↓⟩` with `β = √(1 − α²)`.
    pub fn schmidt(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let beta = (1.0 - alpha * alpha).sqrt();
        Ok(Self {
            amps: Ket4::new(c(alpha), ZERO, ZERO, c(beta)),
        })
    }

    pub fn amplitudes(&self) -> &Ket4 {
        &self.amps
    }

    pub fn projector(&self) -> Operator4 {
        self.amps * self.amps.adjoint()
    }

    /// `U|ψ⟩`; `u` must be unitary for the result to stay normalized.
    pub fn evolve(&self, u: &Operator4) -> Self {
        Self {
            amps: u * self.amps,
        }
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=FRAC_1_SQRT_2 + 1e-15).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// Local coherence vectors `P`, `Q` and correlation tensor `M` of a
/// unit-trace Hermitian two-qubit operator:
///
/// `ρ = ¼ (I⊗I + Σ Pᵢ σᵢ⊗I + Σ Qᵢ I⊗σᵢ + Σ Mᵢⱼ σᵢ⊗σⱼ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceForm {
    pub p: Vector3<f64>,
    pub q: Vector3<f64>,
    pub m: Matrix3<f64>,
}

impl CoherenceForm {
    pub fn zero() -> Self {
        Self {
            p: Vector3::zeros(),
            q: Vector3::zeros(),
            m: Matrix3::zeros(),
        }
    }

    /// Coefficients of an arbitrary Hermitian operator (no trace assumption).
    pub fn of_operator(op: &Operator4) -> Self {
        let coeff = |a: usize, b: usize| (op * pauli_product(a, b)).trace().re;
        Self {
            p: Vector3::from_fn(|i, _| coeff(i + 1, 0)),
            q: Vector3::from_fn(|i, _| coeff(0, i + 1)),
            m: Matrix3::from_fn(|i, j| coeff(i + 1, j + 1)),
        }
    }

    /// Largest absolute difference over all 15 coefficients.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.p - other.p)
            .amax()
            .max((self.q - other.q).amax())
            .max((self.m - other.m).amax())
    }
}

/// `Pᵢ = Tr[ρ(σᵢ⊗I)]`, `Qᵢ = Tr[ρ(I⊗σᵢ)]`, `Mᵢⱼ = Tr[ρ(σᵢ⊗σⱼ)]`.
pub fn to_coherence_form(rho: &DensityMatrix) -> CoherenceForm {
    CoherenceForm::of_operator(rho.operator())
}

/// Linear reconstruction of the unit-trace Hermitian operator with the given
/// coherence data. Positivity is not enforced.
pub fn from_coherence_form(cf: &CoherenceForm) -> Operator4 {
    let mut op = Operator4::identity();
    for i in 0..3 {
        op += pauli_product(i + 1, 0) * c(cf.p[i]);
        op += pauli_product(0, i + 1) * c(cf.q[i]);
        for j in 0..3 {
            op += pauli_product(i + 1, j + 1) * c(cf.m[(i, j)]);
        }
    }
    op * c(0.25)
}

/// Single-qubit irreducible tensor operators `T(½,½)_{K,q}`.
#[derive(Debug, Clone)]
pub struct TensorComponentSet {
    /// `(K, q, T_{K,q})` in the order `(0,0), (1,1), (1,0), (1,-1)`.
    pub components: [(u8, i8, Operator2); 4],
}

impl TensorComponentSet {
    pub fn get(&self, k: u8, q: i8) -> Option<&Operator2> {
        self.components
            .iter()
            .find(|(kk, qq, _)| *kk == k && *qq == q)
            .map(|(_, _, t)| t)
    }

    /// `Σ_{Kq} Tr[T†_{Kq} ρ] T_{Kq}`.
    pub fn expand(&self, rho: &Operator2) -> Operator2 {
        self.components
            .iter()
            .fold(Operator2::zeros(), |acc, (_, _, t)| {
                acc + t * (t.adjoint() * rho).trace()
            })
    }
}

pub fn tensor_component_set() -> TensorComponentSet {
    let sx = sigma_x();
    let sy = sigma_y();
    let sz = sigma_z();
    TensorComponentSet {
        components: [
            (0, 0, identity2() * c(FRAC_1_SQRT_2)),
            (1, 1, -(sx + sy * I) * c(0.5)),
            (1, 0, sz * c(std::f64::consts::SQRT_2 / 2.0)),
            (1, -1, (sx - sy * I) * c(0.5)),
        ],
    }
}

/// The magic basis as the columns of a unitary:
///
/// `e₁ = (|00⟩+|11⟩)/√2`, `e₂ = i(|00⟩−|11⟩)/√2`,
/// `e₃ = i(|01⟩+|10⟩)/√2`, `e₄ = (|01⟩−|10⟩)/√2`.
pub fn magic_basis_matrix() -> Operator4 {
    let h = c(FRAC_1_SQRT_2);
    let ih = I * FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let m = Operator4::new(
        h,    ih,   ZERO, ZERO,
        ZERO, ZERO, ih,   h,
        ZERO, ZERO, ih,   -h,
        h,    -ih,  ZERO, ZERO,
    );
    m
}

pub fn magic_basis() -> [PureState; 4] {
    let m = magic_basis_matrix();
    std::array::from_fn(|k| PureState {
        amps: m.column(k).into_owned(),
    })
}

/// Coefficients `γᵢ = ⟨eᵢ|ψ⟩` in the magic basis.
pub fn magic_coefficients(psi: &PureState) -> Vector4<Complex64> {
    magic_basis_matrix().adjoint() * psi.amplitudes()
}

/// Maps an operator written in the magic basis to the computational basis.
pub fn from_magic_basis(op: &Operator4) -> Operator4 {
    let e = magic_basis_matrix();
    e * op * e.adjoint()
}

/// Concurrence `|Σᵢ γᵢ²|` of a pure state.
pub fn concurrence(psi: &PureState) -> f64 {
    magic_coefficients(psi)
        .iter()
        .map(|g| g * g)
        .sum::<Complex64>()
        .norm()
}

/// A Haar-random member of the class `{(U₁⊗U₂)(α|↑↑⟩ + β|↓↓⟩)}`.
pub fn random_pure_state(alpha: f64, rng: &mut RngState) -> Result<PureState> {
    let base = PureState::schmidt(alpha)?;
    let u1 = haar_su2(rng);
    let u2 = haar_su2(rng);
    Ok(base.evolve(&tensor_product(&u1, &u2)))
}
