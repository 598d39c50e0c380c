//! Haar sampling on SU(2), covariance checks and Monte-Carlo twirling over
//! the local group `SU(2) ⊗ SU(2)`.
//!
//! All randomness flows through [`RngState`]: a ChaCha8 generator keyed by a
//! 64-bit seed and a stream id, so the same `(seed, stream)` pair replays the
//! same draws on every platform. Parallel Monte-Carlo work is split into a
//! fixed number of tasks ([`TWIRL_TASKS`]), each with its own stream, and the
//! partial sums are combined by a pairwise tree in task order. Results are
//! therefore independent of the rayon thread count.

use nalgebra::{DMatrix, Matrix2, SMatrix};
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{fit_params, ChannelParams, KrausSet};
use crate::eigen::hermitian_eigen;
use crate::operator::{c, max_abs_diff, tensor_product, DensityMatrix, Operator2, Operator4};
use crate::superop::{PauliTransferMatrix, Ptm};

/// Number of independent Monte-Carlo tasks used by [`twirl`].
pub const TWIRL_TASKS: usize = 64;

/// Reproducible random stream.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Haar-random element of SU(2): the unit quaternion `(a, b, c, d)` obtained
/// by normalizing four standard normals, mapped to
/// `[[a + ib, c + id], [−c + id, a − ib]]`.
pub fn haar_su2(rng: &mut RngState) -> Operator2 {
    let mut q = [0.0; 4];
    let mut norm = 0.0;
    while norm < 1e-12 {
        q = std::array::from_fn(|_| rng.normal());
        norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let [a, b, cc, d] = q.map(|x| x / norm);
    Matrix2::new(
        Complex64::new(a, b),
        Complex64::new(cc, d),
        Complex64::new(-cc, d),
        Complex64::new(a, -b),
    )
}

/// A pair of local unitaries `(U₁, U₂)` acting as `U₁ ⊗ U₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitaryPair {
    pub u1: Operator2,
    pub u2: Operator2,
}

impl LocalUnitaryPair {
    pub fn sample(rng: &mut RngState) -> Self {
        let u1 = haar_su2(rng);
        let u2 = haar_su2(rng);
        Self { u1, u2 }
    }

    pub fn joint(&self) -> Operator4 {
        tensor_product(&self.u1, &self.u2)
    }
}

/// Random mixed state `G G† / Tr(G G†)` with `G` a complex Ginibre matrix.
pub fn random_density_matrix(rng: &mut RngState) -> DensityMatrix {
    let g = Operator4::from_fn(|_, _| rng.complex_normal());
    let rho = g * g.adjoint();
    let tr = rho.trace().re;
    DensityMatrix::new_unchecked(rho / c(tr))
}

/// Random channel with `rank` Kraus operators, `Kₖ = Aₖ (Σⱼ Aⱼ†Aⱼ)^{-1/2}`
/// for Ginibre blocks `Aₖ`. Generally not covariant.
pub fn random_kraus_set(rank: usize, rng: &mut RngState) -> KrausSet {
    assert!(rank >= 1);
    let blocks: Vec<Operator4> = (0..rank)
        .map(|_| Operator4::from_fn(|_, _| rng.complex_normal()))
        .collect();
    let gram: Operator4 = blocks.iter().map(|a| a.adjoint() * a).sum();
    let e = hermitian_eigen(&DMatrix::from_fn(4, 4, |r, col| gram[(r, col)]));
    let inv_sqrt = Operator4::from_fn(|r, col| {
        (0..4)
            .map(|k| e.vectors[(r, k)] * e.vectors[(col, k)].conj() / e.values[k].sqrt())
            .sum()
    });
    KrausSet::new(blocks.into_iter().map(|a| (1.0, a * inv_sqrt)).collect())
        .expect("normalized Kraus set is trace preserving")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    /// Largest entrywise deviation `|Π(WρW†) − WΠ(ρ)W†|` over all trials.
    pub max_deviation: f64,
    pub trials: usize,
}

/// Monte-Carlo test of `Π(WρW†) = WΠ(ρ)W†` for random states and random
/// `W = U₁ ⊗ U₂`.
pub fn check_covariance<F>(channel: F, trials: usize, rng: &mut RngState) -> CovarianceReport
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    assert!(trials >= 1, "check_covariance needs at least one trial");
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_density_matrix(rng);
        let w = LocalUnitaryPair::sample(rng).joint();
        let lhs = channel(&rho.conjugate(&w));
        let rhs = channel(&rho).conjugate(&w);
        max_deviation = max_deviation.max(max_abs_diff(lhs.operator(), rhs.operator()));
    }
    CovarianceReport {
        max_deviation,
        trials,
    }
}

#[derive(Debug, Clone)]
pub struct TwirlResult {
    /// Monte-Carlo average `(1/N) Σ W†Π(WρW†)W`.
    pub map: PauliTransferMatrix,
    /// Covariant parameters of the averaged map.
    pub params: ChannelParams,
    /// Largest entrywise deviation between the averaged map and
    /// `Π_{params}` on random probe states.
    pub residual: f64,
    pub samples: usize,
    pub tasks: usize,
}

/// Twirls a black-box channel over `SU(2) ⊗ SU(2)` with `samples` Haar draws.
///
/// The black box is first materialized as a Pauli transfer matrix from 16
/// probe states; each draw `W` then contributes `S_Wᵀ R S_W`.
pub fn twirl<F>(channel: F, samples: usize, rng: &mut RngState) -> TwirlResult
where
    F: Fn(&DensityMatrix) -> DensityMatrix,
{
    assert!(samples >= 1, "twirl needs at least one sample");
    let base = PauliTransferMatrix::from_black_box(&channel);
    let sub_seed = rng.next_u64();
    let tasks = TWIRL_TASKS.min(samples);

    let partials: Vec<Ptm> = (0..tasks)
        .into_par_iter()
        .map(|t| {
            let count = samples / tasks + usize::from(t < samples % tasks);
            let mut local = RngState::new(sub_seed, t as u64);
            let mut acc = Ptm::zeros();
            for _ in 0..count {
                let pair = LocalUnitaryPair::sample(&mut local);
                let s = PauliTransferMatrix::local_conjugation(&pair);
                acc += s.transpose() * base.matrix() * s;
            }
            acc
        })
        .collect();

    let total = pairwise_sum(partials);
    let map = PauliTransferMatrix::from_matrix(total / samples as f64);
    let (params, residual) = fit_params(|rho| map.apply(rho), rng);
    TwirlResult {
        map,
        params,
        residual,
        samples,
        tasks,
    }
}

fn pairwise_sum(mut items: Vec<SMatrix<f64, 16, 16>>) -> SMatrix<f64, 16, 16> {
    while items.len() > 1 {
        items = items.chunks(2).map(|pair| pair.iter().sum()).collect();
    }
    items.pop().unwrap_or_else(SMatrix::zeros)
}
