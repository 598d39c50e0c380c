//! The covariant channel family `Π_{V,X,Y}`.
//!
//! A channel commuting with every local unitary `U₁ ⊗ U₂` acts on the
//! coherence data of its input by independent rescaling:
//! `(P, Q, M) ↦ (V·P, X·Q, Y·M)`. Complete positivity carves the
//! tetrahedron with corners
//!
//! | corner | `(V, X, Y)`          | process                         |
//! |--------|----------------------|---------------------------------|
//! | A      | `(1, −1/3, −1/3)`    | perfect ME-NOT, first qubit kept |
//! | B      | `(−1/3, −1/3, 1/9)`  | `u¹ ⊗ u¹`                        |
//! | C      | `(−1/3, 1, −1/3)`    | perfect ME-NOT, second qubit kept|
//! | D      | `(1, 1, 1)`          | identity                         |

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::haar::{random_density_matrix, RngState};
use crate::operator::{
    c, from_coherence_form, max_abs_diff, pauli_product, to_coherence_form, CoherenceForm,
    DensityMatrix, Operator4,
};
use crate::superop::PauliTransferMatrix;
use crate::{Error, Result, CP_TOL};

/// `λ(1,0) = V`, `λ(0,1) = X`, `λ(1,1) = Y`; `λ(0,0) = 1` is implied by
/// trace preservation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub v: f64,
    pub x: f64,
    pub y: f64,
}

pub const CORNER_A: ChannelParams = ChannelParams::new(1.0, -1.0 / 3.0, -1.0 / 3.0);
pub const CORNER_B: ChannelParams = ChannelParams::new(-1.0 / 3.0, -1.0 / 3.0, 1.0 / 9.0);
pub const CORNER_C: ChannelParams = ChannelParams::new(-1.0 / 3.0, 1.0, -1.0 / 3.0);
pub const CORNER_D: ChannelParams = ChannelParams::IDENTITY;

impl ChannelParams {
    pub const IDENTITY: Self = Self::new(1.0, 1.0, 1.0);

    pub const fn new(v: f64, x: f64, y: f64) -> Self {
        Self { v, x, y }
    }

    /// `Z = V + X`, the only combination of `V` and `X` the NOT error sees.
    pub fn z(&self) -> f64 {
        self.v + self.x
    }

    /// Left-hand sides of the four complete-positivity inequalities:
    /// `1+3X+3V+9Y`, `1+3X−V−3Y`, `1−X+3V−3Y`, `1−X−V+Y`.
    pub fn margins(&self) -> [f64; 4] {
        let Self { v, x, y } = *self;
        [
            1.0 + 3.0 * x + 3.0 * v + 9.0 * y,
            1.0 + 3.0 * x - v - 3.0 * y,
            1.0 - x + 3.0 * v - 3.0 * y,
            1.0 - x - v + y,
        ]
    }

    /// Scale factor applied to the `σ_a ⊗ σ_b` component (`0` = identity).
    pub fn scale_factor(&self, a: usize, b: usize) -> f64 {
        match (a, b) {
            (0, 0) => 1.0,
            (_, 0) => self.v,
            (0, _) => self.x,
            _ => self.y,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.v - other.v)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
    }

    pub fn mix(&self, other: &Self, weight: f64) -> Self {
        Self::new(
            weight * self.v + (1.0 - weight) * other.v,
            weight * self.x + (1.0 - weight) * other.x,
            weight * self.y + (1.0 - weight) * other.y,
        )
    }

    /// The linear map `Π_{V,X,Y}` on an arbitrary 4×4 operator (no trace or
    /// positivity assumption), by rescaling its Pauli components.
    pub fn act_on_operator(&self, op: &Operator4) -> Operator4 {
        let mut out = Operator4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                let basis = pauli_product(a, b);
                let coeff = (op * basis).trace() * 0.25 * self.scale_factor(a, b);
                out += basis * coeff;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpReport {
    pub is_cp: bool,
    pub margins: [f64; 4],
}

pub fn cp_check(p: &ChannelParams) -> CpReport {
    let margins = p.margins();
    CpReport {
        is_cp: margins.iter().all(|&m| m >= -CP_TOL),
        margins,
    }
}

fn require_cp(p: &ChannelParams) -> Result<()> {
    let report = cp_check(p);
    if report.is_cp {
        Ok(())
    } else {
        Err(Error::NotCompletelyPositive {
            margins: report.margins,
        })
    }
}

/// Weighted Kraus representation `ρ ↦ Σ wₖ Lₖ ρ Lₖ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    terms: Vec<(f64, Operator4)>,
}

impl KrausSet {
    pub const TP_TOL: f64 = 1e-12;

    /// Fails unless every weight is `≥ −1e-12` and `Σ wₖ Lₖ†Lₖ = I` within
    /// [`Self::TP_TOL`].
    pub fn new(terms: Vec<(f64, Operator4)>) -> Result<Self> {
        Self::with_tolerance(terms, Self::TP_TOL)
    }

    pub fn with_tolerance(terms: Vec<(f64, Operator4)>, tol: f64) -> Result<Self> {
        if let Some(&(w, _)) = terms.iter().find(|(w, _)| *w < -1e-12) {
            return Err(Error::ParameterOutOfRange {
                name: "Kraus weight",
                value: w,
            });
        }
        if terms.iter().any(|(w, l)| {
            !w.is_finite() || l.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        }) {
            return Err(Error::NonFinite);
        }
        let set = Self { terms };
        let residual = set.completeness_residual();
        if residual > tol {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(set)
    }

    pub fn terms(&self) -> &[(f64, Operator4)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Kraus operators `Kₖ = √wₖ Lₖ` with zero-weight terms dropped.
    pub fn operators(&self) -> Vec<Operator4> {
        self.terms
            .iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, l)| l * c(w.sqrt()))
            .collect()
    }

    /// Largest entry of `|Σ wₖ Lₖ†Lₖ − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let sum: Operator4 = self
            .terms
            .iter()
            .map(|(w, l)| l.adjoint() * l * c(*w))
            .sum();
        max_abs_diff(&sum, &Operator4::identity())
    }

    pub fn apply_operator(&self, op: &Operator4) -> Operator4 {
        self.terms
            .iter()
            .map(|(w, l)| l * op * l.adjoint() * c(*w))
            .sum()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.apply_operator(rho.operator()))
    }
}

/// Weights `l` of the four Pauli classes: identity, `σᵢ⊗I`, `I⊗σᵢ`,
/// `σᵢ⊗σⱼ` (per operator).
pub fn kraus_weights(p: &ChannelParams) -> [f64; 4] {
    p.margins().map(|m| m / 16.0)
}

/// The 16-term Kraus set `l_{ab} (σ_a⊗σ_b) ρ (σ_a⊗σ_b)†`, in the order
/// `a = 0..4, b = 0..4`.
pub fn kraus_set(p: &ChannelParams) -> Result<KrausSet> {
    require_cp(p)?;
    let [l00, li0, l0i, lij] = kraus_weights(p);
    let mut terms = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let w = match (a, b) {
                (0, 0) => l00,
                (_, 0) => li0,
                (0, _) => l0i,
                _ => lij,
            };
            // Margins may sit within CP_TOL below zero.
            terms.push((w.max(0.0), pauli_product(a, b)));
        }
    }
    let set = KrausSet { terms };
    let residual = set.completeness_residual();
    if residual > KrausSet::TP_TOL {
        return Err(Error::NotTracePreserving(residual));
    }
    Ok(set)
}

/// `Π_{V,X,Y}(ρ) = ρ(V·P, X·Q, Y·M)`.
pub fn apply(p: &ChannelParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_cp(p)?;
    let cf = to_coherence_form(rho);
    let scaled = CoherenceForm {
        p: cf.p * p.v,
        q: cf.q * p.x,
        m: cf.m * p.y,
    };
    Ok(DensityMatrix::new_unchecked(from_coherence_form(&scaled)))
}

/// The same channel evaluated through its Kraus sum.
pub fn apply_kraus(p: &ChannelParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(kraus_set(p)?.apply(rho))
}

/// Choi matrix `J = Σᵢⱼ Π(|i⟩⟨j|) ⊗ |i⟩⟨j|`, unnormalized (trace 4).
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: DMatrix<Complex64>,
}

impl ChoiMatrix {
    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .values
            .iter()
            .copied()
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.matrix).min_value()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Works for any triple; negative eigenvalues flag non-CP parameters.
pub fn choi_matrix(p: &ChannelParams) -> ChoiMatrix {
    let mut j = DMatrix::<Complex64>::zeros(16, 16);
    for i in 0..4 {
        for k in 0..4 {
            let mut unit = Operator4::zeros();
            unit[(i, k)] = c(1.0);
            let image = p.act_on_operator(&unit);
            // (image ⊗ |i⟩⟨k|)[(4r + i), (4s + k)] = image[(r, s)]
            for r in 0..4 {
                for s in 0..4 {
                    j[(4 * r + i, 4 * s + k)] += image[(r, s)];
                }
            }
        }
    }
    ChoiMatrix { matrix: j }
}

/// Multiplicities of the four closed-form Choi eigenvalues `¼·margins`,
/// measured numerically and frozen.
pub const CHOI_MULTIPLICITIES: [usize; 4] = [1, 3, 3, 9];

/// Closed-form Choi spectrum as `(eigenvalue, multiplicity)` pairs.
pub fn choi_spectrum(p: &ChannelParams) -> [(f64, usize); 4] {
    let m = p.margins();
    std::array::from_fn(|k| (m[k] / 4.0, CHOI_MULTIPLICITIES[k]))
}

/// Barycentric weights on the corners: `identity` ↔ D, `sep` ↔ B,
/// `me1` ↔ A, `me2` ↔ C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexWeights {
    pub identity: f64,
    pub sep: f64,
    pub me1: f64,
    pub me2: f64,
}

impl ConvexWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.identity, self.sep, self.me1, self.me2]
    }

    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.as_array().iter().all(|&w| w >= -tol)
    }

    /// `a₁D + a₂B + a₃A + a₄C`.
    pub fn reconstruct(&self) -> ChannelParams {
        let corners = [CORNER_D, CORNER_B, CORNER_A, CORNER_C];
        let w = self.as_array();
        let mut out = ChannelParams::new(0.0, 0.0, 0.0);
        for (wk, ck) in w.iter().zip(corners) {
            out.v += wk * ck.v;
            out.x += wk * ck.x;
            out.y += wk * ck.y;
        }
        out
    }
}

/// Solves `Σ aₖ cornerₖ = (V, X, Y)`, `Σ aₖ = 1` exactly (LU with pivoting).
/// Non-CP triples yield negative weights.
pub fn convex_decompose(p: &ChannelParams) -> ConvexWeights {
    let corners = [CORNER_D, CORNER_B, CORNER_A, CORNER_C];
    let system = Matrix4::from_fn(|row, col| match row {
        0 => corners[col].v,
        1 => corners[col].x,
        2 => corners[col].y,
        _ => 1.0,
    });
    let rhs = Vector4::new(p.v, p.x, p.y, 1.0);
    let a = system
        .lu()
        .solve(&rhs)
        .expect("tetrahedron corners are affinely independent");
    ConvexWeights {
        identity: a[0],
        sep: a[1],
        me1: a[2],
        me2: a[3],
    }
}

/// Default residual tolerance of [`extract_params`].
pub const EXTRACT_TOL: f64 = 1e-8;
const RESIDUAL_PROBES: usize = 20;
const RESIDUAL_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extraction {
    pub params: ChannelParams,
    /// Largest entrywise deviation between the black box and `Π_{params}` on
    /// the random probe states.
    pub residual: f64,
}

/// Reads `(V, X, Y)` off a black box by probing with `¼(I + σ_a⊗σ_b)` and
/// averaging the response over all axes; for a covariant map every axis
/// gives the same value. The residual is the largest deviation from
/// `Π_{V,X,Y}` on random states.
pub fn fit_params<F>(black_box: F, rng: &mut RngState) -> (ChannelParams, f64)
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    let params = PauliTransferMatrix::from_black_box(&black_box).covariant_projection();
    let mut residual: f64 = 0.0;
    for _ in 0..RESIDUAL_PROBES {
        let rho = random_density_matrix(rng);
        let expected = params.act_on_operator(rho.operator());
        residual = residual.max(max_abs_diff(black_box(&rho).operator(), &expected));
    }
    (params, residual)
}

/// [`fit_params`] with a fixed probe seed, failing with
/// [`Error::NotCovariant`] when the residual exceeds `tol`.
pub fn extract_params_with_tol<F>(black_box: F, tol: f64) -> Result<Extraction>
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    let mut rng = RngState::new(RESIDUAL_SEED, 0);
    let (params, residual) = fit_params(black_box, &mut rng);
    if residual > tol || !residual.is_finite() {
        return Err(Error::NotCovariant { residual, tol });
    }
    Ok(Extraction { params, residual })
}

pub fn extract_params<F>(black_box: F) -> Result<Extraction>
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    extract_params_with_tol(black_box, EXTRACT_TOL)
}
