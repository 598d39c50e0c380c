//! Cyclic Jacobi diagonalization of small complex Hermitian matrices.
//!
//! Every matrix this crate diagonalizes is at most 16×16, where a plain
//! Jacobi sweep is both accurate to a few ulps and fully deterministic:
//! pivots are visited in row-major order `(0,1), (0,2), …, (n-2,n-1)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Off-diagonal Frobenius norm below which a sweep sequence stops,
/// relative to `max(1, ‖A‖_F)`.
pub const JACOBI_THRESHOLD: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `A = V diag(values) V†`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: DMatrix<Complex64>,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix. Only the Hermitian part of `a` is used.
///
/// Panics if `a` is not square.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> HermitianEigen {
    assert!(a.is_square(), "hermitian_eigen needs a square matrix");
    let n = a.nrows();
    let mut m = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = m.norm().max(1.0);

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_norm(&m) > JACOBI_THRESHOLD * scale {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)].re));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen {
        values,
        vectors,
        sweeps,
    }
}

/// One complex Jacobi rotation annihilating `m[(p, q)]`.
///
/// With `m[(p,q)] = r e^{iθ}` the transform is `J = diag(1, e^{-iθ})·R`
/// where `R` is the real rotation that diagonalizes the resulting real
/// symmetric 2×2 block.
fn rotate(m: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iθ}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[c, s], [-s e^{-iθ}, c e^{-iθ}]] on the (p, q) plane.
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.nrows();
    // m <- m J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    // m <- J† m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    // v <- v J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(a: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_eigen(a).values.iter().copied().collect()
}
