mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use covnot_core::haar::{random_kraus_set, TWIRL_TASKS};
use covnot_core::operator::Operator2;
use covnot_core::unot::{sampled_error, NotFamily};
use covnot_core::{
    apply, covariant_error, cp_check, extract_params, haar_su2, perfect_not_magic, twirl,
    ChannelParams, DensityMatrix, RngState,
};

use common::*;

/// Mean and standard error of a statistic over `n` Haar draws.
fn moment<F: Fn(&Operator2) -> f64>(
    n: usize,
    seed: u64,
    pre: Option<Operator2>,
    f: F,
) -> (f64, f64) {
    let mut rng = RngState::new(seed, 0);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..n {
        let mut u = haar_su2(&mut rng);
        if let Some(w) = pre {
            u = w * u;
        }
        let x = f(&u);
        sum += x;
        sum2 += x * x;
    }
    let mean = sum / n as f64;
    let var = sum2 / n as f64 - mean * mean;
    (mean, (var / n as f64).sqrt())
}

#[test]
fn haar_first_and_second_moments() {
    // Under Haar measure on SU(2), |U₀₀|² is uniform on [0, 1] and Tr U has
    // mean zero.
    let (m, se) = moment(1_000_000, 1, None, |u| u[(0, 0)].norm_sqr());
    assert!((m - 0.5).abs() < 3.0 * se, "E|U00|² = {m} ± {se}");
    assert!((se - (1.0f64 / 12.0 / 1e6).sqrt()).abs() < 1e-5);
    let (m, se) = moment(1_000_000, 2, None, |u| u.trace().re);
    assert!(m.abs() < 3.0 * se, "E Tr U = {m} ± {se}");
}

#[test]
fn haar_measure_is_left_invariant() {
    let w = haar_su2(&mut RngState::new(99, 0));
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let (raw, se_raw) = moment(100_000, 3, None, |u| u[(i, j)].norm_sqr());
        let (shifted, se_shift) = moment(100_000, 4, Some(w), |u| u[(i, j)].norm_sqr());
        let se = (se_raw * se_raw + se_shift * se_shift).sqrt();
        assert!(
            (raw - shifted).abs() < 3.0 * se,
            "({i},{j}): {raw} vs {shifted}"
        );
    }
}

#[test]
fn twirl_of_identity_and_covariant_channels() {
    let out = twirl(|rho| rho.clone(), 100_000, &mut RngState::new(5, 0));
    assert!(out.params.max_abs_diff(&ChannelParams::IDENTITY) < 1e-3);
    assert_eq!(out.tasks, TWIRL_TASKS);
    let p = ChannelParams::new(-1.0 / 15.0, -1.0 / 15.0, -1.0 / 15.0);
    let out = twirl(
        |rho| apply(&p, rho).unwrap(),
        100_000,
        &mut RngState::new(6, 0),
    );
    assert!(out.params.max_abs_diff(&p) < 1e-3);
    assert!(out.residual < 1e-10);
}

#[test]
fn twirled_random_channels_are_cp_and_exact() {
    let mut rng = RngState::new(7, 0);
    for rank in 1..=4 {
        let kraus = random_kraus_set(rank, &mut rng);
        let out = twirl(|rho| kraus.apply(rho), 10_000, &mut rng);
        assert!(out.params.max_abs_diff(&exact_twirl_params(&kraus)) < 1e-3);
        assert!(cp_check(&out.params).margins.iter().all(|&m| m >= -1e-3));
    }
}

#[test]
fn twirling_never_increases_the_not_error() {
    let mut rng = RngState::new(8, 0);
    for n in 0..20 {
        let kraus = random_kraus_set(1 + n % 4, &mut rng);
        let out = twirl(|rho| kraus.apply(rho), 20_000, &mut rng);
        let alpha = rng.uniform() * FRAC_1_SQRT_2;
        let twirled = covariant_error(out.params.z(), out.params.y, alpha);
        let original = sampled_error(|rho| kraus.apply(rho), alpha, 500, &mut rng).unwrap();
        assert!(
            twirled <= original + 1e-9,
            "channel {n}: {twirled} > {original}"
        );
    }
}

#[test]
fn twirl_is_linear() {
    let mut rng = RngState::new(9, 0);
    let a = random_kraus_set(2, &mut rng);
    let b = random_kraus_set(3, &mut rng);
    let w = 0.3;
    let mix = |rho: &DensityMatrix| {
        let x = a.apply(rho).into_operator() * c(w) + b.apply(rho).into_operator() * c(1.0 - w);
        DensityMatrix::new_unchecked(x)
    };
    let ta = twirl(|rho| a.apply(rho), 100_000, &mut rng).params;
    let tb = twirl(|rho| b.apply(rho), 100_000, &mut rng).params;
    let tm = twirl(mix, 100_000, &mut rng).params;
    assert!(tm.max_abs_diff(&ta.mix(&tb, w)) < 2e-3);
}

#[test]
fn perfect_not_twirls_onto_the_me_line() {
    let mut rng = RngState::new(10, 0);
    for family in [NotFamily::U, NotFamily::V] {
        let op = perfect_not_magic([0.6, 0.0, 0.8], family).unwrap();
        let u = *op.operator();
        for _ in 0..100 {
            let phi = covnot_core::random_pure_state(FRAC_1_SQRT_2, &mut rng).unwrap();
            let out = DensityMatrix::from_pure(&phi.evolve(&u));
            assert!(covnot_core::distance_to_complement(&out, &phi).abs() < 1e-12);
        }
        let t = twirl(|rho| rho.conjugate(&u), 100_000, &mut rng);
        let e = extract_params(|rho| t.map.apply(rho));
        // The MC map is only covariant to O(N^-1/2): extraction at 1e-8 fails,
        // but the parameters sit on the ME line.
        assert!(e.is_err());
        assert!((t.params.y + 1.0 / 3.0).abs() < 1e-3, "{:?}", t.params);
        assert!((t.params.z() - 2.0 / 3.0).abs() < 1e-3, "{:?}", t.params);
    }
}
