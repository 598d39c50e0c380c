//! Perfect NOT operators for maximally entangled states.
//!
//! In the magic basis every maximally entangled state has real coefficients
//! (up to a global phase), so any real antisymmetric 4×4 matrix `A` gives
//! `⟨φ|A|φ⟩ = 0` on all of them. The unitary ones are the unit-norm
//! combinations of either `U₁, U₂, U₃` or `V₁, V₂, V₃`, never both.

use nalgebra::Matrix4;

use crate::operator::{c, from_magic_basis, Operator4};
use crate::{Error, Result};

pub type IntMatrix = [[i32; 4]; 4];

#[rustfmt::skip]
pub const U_MATRICES: [IntMatrix; 3] = [
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
];

#[rustfmt::skip]
pub const V_MATRICES: [IntMatrix; 3] = [
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFamily {
    U,
    V,
}

impl NotFamily {
    pub fn generators(self) -> &'static [IntMatrix; 3] {
        match self {
            Self::U => &U_MATRICES,
            Self::V => &V_MATRICES,
        }
    }
}

/// `𝒰 = Σ cᵢ Gᵢ` for one generator family, `Σ cᵢ² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicNotOperator {
    pub coefficients: [f64; 3],
    pub family: NotFamily,
    /// Real antisymmetric matrix in the magic basis.
    pub magic: Matrix4<f64>,
    pub computational: Operator4,
}

impl MagicNotOperator {
    pub fn operator(&self) -> &Operator4 {
        &self.computational
    }

    /// `‖𝒰𝒰† − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.computational * self.computational.adjoint() - Operator4::identity()).norm()
    }

    /// `‖𝒰² + I‖_F`.
    pub fn square_defect(&self) -> f64 {
        (self.computational * self.computational + Operator4::identity()).norm()
    }
}

const NORM_TOL: f64 = 1e-12;

pub fn perfect_not_magic(coeffs: [f64; 3], family: NotFamily) -> Result<MagicNotOperator> {
    if coeffs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NonUnitNorm(norm));
    }
    let gens = family.generators();
    let magic = Matrix4::from_fn(|r, col| (0..3).map(|i| coeffs[i] * gens[i][r][col] as f64).sum());
    let computational = from_magic_basis(&magic.map(c));
    Ok(MagicNotOperator {
        coefficients: coeffs,
        family,
        magic,
        computational,
    })
}

/// Builds `Σ αᵢUᵢ + βᵢVᵢ`; only one family may be nonzero.
pub fn perfect_not_from_components(alpha: [f64; 3], beta: [f64; 3]) -> Result<MagicNotOperator> {
    let nonzero = |v: &[f64; 3]| v.iter().any(|&x| x != 0.0);
    match (nonzero(&alpha), nonzero(&beta)) {
        (true, true) => Err(Error::MixedFamilies),
        (_, true) => perfect_not_magic(beta, NotFamily::V),
        _ => perfect_not_magic(alpha, NotFamily::U),
    }
}

fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = [[0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn add(a: &IntMatrix, b: &IntMatrix, scale: i32) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + scale * b[i][j]))
}

fn transpose(a: &IntMatrix) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

fn scaled_identity(s: i32) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { s } else { 0 }))
}

const ZERO4: IntMatrix = [[0; 4]; 4];

fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
    /// Whether the generator matrices above are expected to satisfy it.
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    pub checks: Vec<RelationCheck>,
    /// Structure-constant sign `s` in `GᵢGⱼ = −δᵢⱼI + s·εᵢⱼₖGₖ`, measured.
    pub u_orientation: i32,
    pub v_orientation: i32,
}

impl AlgebraReport {
    /// Every check came out as expected.
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.holds == c.expected)
    }
}

fn product_relation(gens: &[IntMatrix; 3], sign: i32) -> bool {
    (0..3).all(|i| {
        (0..3).all(|j| {
            let mut rhs = scaled_identity(if i == j { -1 } else { 0 });
            for (k, g) in gens.iter().enumerate() {
                rhs = add(&rhs, g, sign * levi_civita(i, j, k));
            }
            mul(&gens[i], &gens[j]) == rhs
        })
    })
}

fn orientation(gens: &[IntMatrix; 3]) -> i32 {
    if product_relation(gens, 1) {
        1
    } else if product_relation(gens, -1) {
        -1
    } else {
        0
    }
}

/// Checks the generator algebra in exact integer arithmetic.
///
/// The `V` matrices obey `VᵢVⱼ = −δᵢⱼI − εᵢⱼₖVₖ`, the mirror image of
/// the `U` family; the `+εᵢⱼₖ` form is reported with `expected: false`.
pub fn magic_algebra_check() -> AlgebraReport {
    let mut checks = Vec::new();
    let mut push = |name: String, holds: bool, expected: bool| {
        checks.push(RelationCheck {
            name,
            holds,
            expected,
        })
    };

    for (label, gens) in [("U", &U_MATRICES), ("V", &V_MATRICES)] {
        let anti_dagger = (0..3).all(|i| {
            (0..3).all(|j| {
                let s = add(
                    &mul(&gens[i], &transpose(&gens[j])),
                    &mul(&transpose(&gens[j]), &gens[i]),
                    1,
                );
                s == scaled_identity(if i == j { 2 } else { 0 })
            })
        });
        push(
            format!("{{{label}_i, {label}_j†}} = 2δ_ij I"),
            anti_dagger,
            true,
        );

        let anti = (0..3).all(|i| {
            (0..3).all(|j| {
                let s = add(&mul(&gens[i], &gens[j]), &mul(&gens[j], &gens[i]), 1);
                s == scaled_identity(if i == j { -2 } else { 0 })
            })
        });
        push(format!("-{{{label}_i, {label}_j}} = 2δ_ij I"), anti, true);

        let antisym = gens.iter().all(|g| add(&transpose(g), g, 1) == ZERO4);
        push(format!("{label}_iᵀ = -{label}_i"), antisym, true);

        push(
            format!("{label}_i {label}_j = -δ_ij I + ε_ijk {label}_k"),
            product_relation(gens, 1),
            label == "U",
        );
        push(
            format!("{label}_i {label}_j = -δ_ij I - ε_ijk {label}_k"),
            product_relation(gens, -1),
            label == "V",
        );
    }

    let commute = (0..3).all(|i| {
        (0..3).all(|j| mul(&U_MATRICES[i], &V_MATRICES[j]) == mul(&V_MATRICES[j], &U_MATRICES[i]))
    });
    push("[U_i, V_j] = 0".to_string(), commute, true);

    AlgebraReport {
        checks,
        u_orientation: orientation(&U_MATRICES),
        v_orientation: orientation(&V_MATRICES),
    }
}
