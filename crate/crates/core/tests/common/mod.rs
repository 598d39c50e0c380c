//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls the routine it is used to check. Eigen-decompositions
//! go through nalgebra rather than the crate's Jacobi solver.

#![allow(dead_code)]

use covnot_core::operator::{DensityMatrix, Operator4, PureState};
use covnot_core::{ChannelParams, RngState};
use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Nearest density matrix in Frobenius norm: eigen-decompose and project the
/// spectrum onto the simplex.
pub fn project_density(s: &Matrix3<Complex64>) -> Matrix3<Complex64> {
    let herm = (s + s.adjoint()) * c(0.5);
    let e = SymmetricEigen::new(herm);
    let w = project_simplex(e.eigenvalues.as_slice());
    let mut out = Matrix3::zeros();
    for (k, wk) in w.iter().enumerate() {
        let v = e.eigenvectors.column(k);
        out += v * v.adjoint() * c(*wk);
    }
    out
}

/// Orthonormal basis of `φ⊥` from the nalgebra eigenvectors of `I − |φ⟩⟨φ|`.
fn complement(phi: &PureState) -> nalgebra::Matrix4x3<Complex64> {
    let proj = Operator4::identity() - phi.projector();
    let e = SymmetricEigen::new(proj);
    let mut cols: Vec<_> = (0..4).collect();
    cols.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    nalgebra::Matrix4x3::from_columns(&[
        e.eigenvectors.column(cols[0]).into_owned(),
        e.eigenvectors.column(cols[1]).into_owned(),
        e.eigenvectors.column(cols[2]).into_owned(),
    ])
}

/// `min Tr(ρ − σ)²` over states supported on `φ⊥`, by plain projected
/// gradient descent on `σ = Q S Q†`.
pub fn projected_descent_distance(rho: &DensityMatrix, phi: &PureState) -> f64 {
    let q = complement(phi);
    let objective = |s: &Matrix3<Complex64>| {
        let d = rho.operator() - q * s * q.adjoint();
        (d * d).trace().re
    };
    let mut s = Matrix3::<Complex64>::identity() * c(1.0 / 3.0);
    let step = 0.1;
    for _ in 0..2000 {
        // ∇_S Tr(ρ − QSQ†)² = 2(S − Q†ρQ)
        let grad = (s - q.adjoint() * rho.operator() * q) * c(2.0);
        let next = project_density(&(s - grad * c(step)));
        let moved = (next - s).norm();
        s = next;
        if moved < 1e-15 {
            break;
        }
    }
    objective(&s)
}

/// Barycentric weights `(identity, sep, me1, me2)` from the margins.
pub fn barycentric_oracle(p: &ChannelParams) -> [f64; 4] {
    let (v, x, y) = (p.v, p.x, p.y);
    let m1 = 1.0 + 3.0 * x + 3.0 * v + 9.0 * y;
    let m2 = 1.0 + 3.0 * x - v - 3.0 * y;
    let m3 = 1.0 - x + 3.0 * v - 3.0 * y;
    let m4 = 1.0 - x - v + y;
    [m1 / 16.0, 9.0 * m4 / 16.0, 3.0 * m3 / 16.0, 3.0 * m2 / 16.0]
}

pub fn margins_oracle(p: &ChannelParams) -> [f64; 4] {
    let (v, x, y) = (p.v, p.x, p.y);
    [
        1.0 + 3.0 * x + 3.0 * v + 9.0 * y,
        1.0 + 3.0 * x - v - 3.0 * y,
        1.0 - x + 3.0 * v - 3.0 * y,
        1.0 - x - v + y,
    ]
}

/// Uniform point of the CP tetrahedron by rejection from the box.
pub fn random_cp_triple(rng: &mut RngState) -> ChannelParams {
    loop {
        let mut draw = || -1.0 / 3.0 + 4.0 / 3.0 * rng.uniform();
        let p = ChannelParams::new(draw(), draw(), draw());
        if margins_oracle(&p).iter().all(|&m| m >= 0.0) {
            return p;
        }
    }
}

/// Entry-by-entry output of `Π_{V,X,Y}` on `α|↑↑⟩ + β|↓↓⟩`.
pub fn pure_output_oracle(p: &ChannelParams, alpha: f64) -> Operator4 {
    let beta = (1.0 - alpha * alpha).sqrt();
    let d = alpha * alpha - beta * beta;
    let (v, x, y) = (p.v, p.x, p.y);
    let mut out = Operator4::zeros();
    out[(0, 0)] = c((1.0 + y) / 4.0 + (x + v) / 4.0 * d);
    out[(1, 1)] = c((1.0 - y) / 4.0 + (v - x) / 4.0 * d);
    out[(2, 2)] = c((1.0 - y) / 4.0 + (x - v) / 4.0 * d);
    out[(3, 3)] = c((1.0 + y) / 4.0 - (x + v) / 4.0 * d);
    out[(0, 3)] = c(y * alpha * beta);
    out[(3, 0)] = c(y * alpha * beta);
    out
}

/// Ascending eigenvalues through nalgebra.
pub fn nalgebra_eigvalsh(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Closed-form spectrum expanded with multiplicities, ascending.
pub fn closed_form_choi_spectrum(p: &ChannelParams) -> Vec<f64> {
    let m = margins_oracle(p);
    let mut ev: Vec<f64> = [(m[0], 1), (m[1], 3), (m[2], 3), (m[3], 9)]
        .iter()
        .flat_map(|&(v, k)| std::iter::repeat_n(v / 4.0, k))
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_entry_diff(a: &Operator4, b: &Operator4) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Parameters of the exact twirl, straight from the Kraus operators via
/// Schur orthogonality of the SO(3) matrix elements:
/// `V = (1/12) Σᵢ Tr[(σᵢ⊗I) Φ(σᵢ⊗I)]`, likewise `X` and `Y` (with 1/36).
pub fn exact_twirl_params(kraus: &covnot_core::KrausSet) -> ChannelParams {
    use covnot_core::operator::pauli_product;
    let phi = |op: &Operator4| -> Operator4 {
        kraus.operators().iter().map(|k| k * op * k.adjoint()).sum()
    };
    let overlap = |a: usize, b: usize| {
        let s = pauli_product(a, b);
        (s * phi(&s)).trace().re / 4.0
    };
    let mut v = 0.0;
    let mut x = 0.0;
    let mut y = 0.0;
    for i in 1..4 {
        v += overlap(i, 0) / 3.0;
        x += overlap(0, i) / 3.0;
        for j in 1..4 {
            y += overlap(i, j) / 9.0;
        }
    }
    ChannelParams::new(v, x, y)
}
