mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use covnot_core::channel::{extract_params_with_tol, CORNER_A, CORNER_B, CORNER_C, CORNER_D};
use covnot_core::haar::random_density_matrix;
use covnot_core::operator::{magic_coefficients, pauli_product, Ket4, Operator2, Operator4};
use covnot_core::unot::{alpha_0, u_me};
use covnot_core::{
    apply, apply_kraus, check_covariance, concurrence, covariant_error, cp_check,
    distance_to_complement, extract_params, from_coherence_form, haar_su2, optimal_not,
    random_pure_state, tensor_product, to_coherence_form, ChannelParams, CoherenceForm,
    DensityMatrix, PureState, RngState,
};
use num_complex::Complex64;
use proptest::prelude::*;

use common::*;

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..1.0f64
}

fn alpha() -> impl Strategy<Value = f64> {
    0.0..=FRAC_1_SQRT_2
}

fn cp_triple() -> impl Strategy<Value = ChannelParams> {
    seed().prop_map(|s| random_cp_triple(&mut RngState::new(s, 0)))
}

fn operator2(rng: &mut RngState) -> Operator2 {
    Operator2::from_fn(|_, _| rng.complex_normal())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kronecker_mixed_product(s in seed()) {
        let mut rng = RngState::new(s, 1);
        let (a, b, cc, d) = (operator2(&mut rng), operator2(&mut rng), operator2(&mut rng), operator2(&mut rng));
        let lhs = tensor_product(&a, &b) * tensor_product(&cc, &d);
        let rhs = tensor_product(&(a * cc), &(b * d));
        prop_assert!(max_entry_diff(&lhs, &rhs) < 1e-11 * (1.0 + lhs.norm()));
    }

    #[test]
    fn coherence_form_round_trips(s in seed()) {
        let rho = random_density_matrix(&mut RngState::new(s, 2));
        let cf = to_coherence_form(&rho);
        prop_assert!(max_entry_diff(&from_coherence_form(&cf), rho.operator()) < 1e-14);
        let again = to_coherence_form(&DensityMatrix::new_unchecked(from_coherence_form(&cf)));
        prop_assert!(again.max_abs_diff(&cf) < 1e-14);
    }

    #[test]
    fn coherence_components_are_pauli_expectations(s in seed()) {
        let rho = random_density_matrix(&mut RngState::new(s, 3));
        let cf: CoherenceForm = to_coherence_form(&rho);
        for i in 1..4 {
            let p = (rho.operator() * pauli_product(i, 0)).trace().re;
            let q = (rho.operator() * pauli_product(0, i)).trace().re;
            prop_assert!((cf.p[i - 1] - p).abs() < 1e-14);
            prop_assert!((cf.q[i - 1] - q).abs() < 1e-14);
            for j in 1..4 {
                let m = (rho.operator() * pauli_product(i, j)).trace().re;
                prop_assert!((cf.m[(i - 1, j - 1)] - m).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(s in seed(), a in alpha()) {
        let mut rng = RngState::new(s, 4);
        let phi = random_pure_state(a, &mut rng).unwrap();
        let w = tensor_product(&haar_su2(&mut rng), &haar_su2(&mut rng));
        let expected = 2.0 * a * (1.0 - a * a).sqrt();
        prop_assert!((concurrence(&phi) - expected).abs() < 1e-12);
        prop_assert!((concurrence(&phi.evolve(&w)) - expected).abs() < 1e-12);
    }

    #[test]
    fn me_states_have_real_magic_coefficients(s in seed(), theta in 0.0..std::f64::consts::TAU) {
        let mut rng = RngState::new(s, 5);
        let phi = random_pure_state(FRAC_1_SQRT_2, &mut rng).unwrap();
        let amps: Ket4 = phi.amplitudes() * Complex64::from_polar(1.0, theta);
        let gamma = magic_coefficients(&PureState::new(amps).unwrap());
        // remove the global phase using the largest component
        let k = (0..4).max_by(|&i, &j| gamma[i].norm().total_cmp(&gamma[j].norm())).unwrap();
        let phase = gamma[k] / gamma[k].norm();
        for g in gamma.iter() {
            prop_assert!((g / phase).im.abs() < 1e-12);
        }
    }

    #[test]
    fn channels_preserve_trace_and_positivity(p in cp_triple(), s in seed()) {
        let rho = random_density_matrix(&mut RngState::new(s, 6));
        let out = apply(&p, &rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(DensityMatrix::new(out.into_operator()).is_ok());
    }

    #[test]
    fn kraus_and_coherence_paths_agree(p in cp_triple(), s in seed()) {
        let rho = random_density_matrix(&mut RngState::new(s, 7));
        let a = apply(&p, &rho).unwrap();
        let b = apply_kraus(&p, &rho).unwrap();
        prop_assert!(max_entry_diff(a.operator(), b.operator()) < 1e-12);
    }

    #[test]
    fn family_is_covariant(p in cp_triple(), s in seed()) {
        let mut rng = RngState::new(s, 8);
        let report = check_covariance(|rho| apply(&p, rho).unwrap(), 20, &mut rng);
        prop_assert!(report.max_deviation < 1e-11);
    }

    #[test]
    fn extraction_is_linear(p in cp_triple(), q in cp_triple(), w in unit()) {
        let mixed = |rho: &DensityMatrix| {
            let a = apply(&p, rho).unwrap().into_operator();
            let b = apply(&q, rho).unwrap().into_operator();
            DensityMatrix::new_unchecked(a * c(w) + b * c(1.0 - w))
        };
        let e = extract_params(mixed).unwrap();
        prop_assert!(e.params.max_abs_diff(&p.mix(&q, w)) < 1e-10);
    }

    #[test]
    fn box_display_is_equivalent_to_margins(v in -1.5..1.5f64, x in -1.5..1.5f64, y in -1.5..1.5f64) {
        let p = ChannelParams::new(v, x, y);
        let margins = margins_oracle(&p);
        prop_assume!(margins.iter().all(|m| m.abs() > 1e-9));
        let in_box = (-1.0 / 3.0..=1.0).contains(&x)
            && (-1.0 / 3.0..=1.0).contains(&v)
            && y >= (-(1.0 + 3.0 * x + 3.0 * v) / 9.0).max(-1.0 + x + v)
            && y <= (1.0 + 3.0 * x.min(v) - x.max(v)) / 3.0;
        prop_assert_eq!(in_box, cp_check(&p).is_cp);
    }

    #[test]
    fn error_is_uniform_on_a_class(p in cp_triple(), a in alpha(), s in seed()) {
        let mut rng = RngState::new(s, 9);
        let expected = covariant_error(p.z(), p.y, a);
        for _ in 0..10 {
            let phi = random_pure_state(a, &mut rng).unwrap();
            let out = apply(&p, &DensityMatrix::from_pure(&phi)).unwrap();
            prop_assert!((distance_to_complement(&out, &phi) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn optimum_beats_every_cp_channel(p in cp_triple(), a in alpha()) {
        let best = optimal_not(a).unwrap().delta;
        prop_assert!(best <= covariant_error(p.z(), p.y, a) + 1e-12);
    }

    #[test]
    fn distance_formula_matches_descent(s in seed(), a in alpha()) {
        let mut rng = RngState::new(s, 10);
        let rho = random_density_matrix(&mut rng);
        let phi = random_pure_state(a, &mut rng).unwrap();
        let d = distance_to_complement(&rho, &phi);
        prop_assert!((d - projected_descent_distance(&rho, &phi)).abs() < 1e-8);
        prop_assert!((-1e-12..=4.0 / 3.0 + 1e-12).contains(&d));
    }

    #[test]
    fn convex_weights_match_margins(p in cp_triple()) {
        let w = covnot_core::convex_decompose(&p);
        for (got, want) in w.as_array().iter().zip(barycentric_oracle(&p)) {
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn choi_spectrum_matches_closed_form(v in -1.2..1.2f64, x in -1.2..1.2f64, y in -1.2..1.2f64) {
        let p = ChannelParams::new(v, x, y);
        let j = covnot_core::choi_matrix(&p);
        let want = closed_form_choi_spectrum(&p);
        for (a, b) in j.eigenvalues().iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        for (a, b) in nalgebra_eigvalsh(&j.matrix).iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn branches_are_continuous_at_alpha_0() {
    let a0 = alpha_0();
    let below = optimal_not(a0 - 1e-9).unwrap().delta;
    let above = optimal_not(a0 + 1e-9).unwrap().delta;
    assert!((below - above).abs() < 1e-7, "{below} vs {above}");
}

#[test]
fn optimal_error_rises_then_falls() {
    let am = covnot_core::unot::alpha_max();
    let grid: Vec<f64> = (0..200).map(|k| FRAC_1_SQRT_2 * k as f64 / 199.0).collect();
    let deltas: Vec<f64> = grid
        .iter()
        .map(|&a| optimal_not(a).unwrap().delta)
        .collect();
    for k in 1..grid.len() {
        if grid[k] <= am {
            assert!(
                deltas[k] >= deltas[k - 1] - 1e-15,
                "not rising at {}",
                grid[k]
            );
        } else if grid[k - 1] >= am {
            assert!(
                deltas[k] <= deltas[k - 1] + 1e-15,
                "not falling at {}",
                grid[k]
            );
        }
    }
}

#[test]
fn zero_error_only_for_perfect_not_line() {
    // Δ = 0 at α = 1/√2 exactly on Y = −1/3, Z = 2/3.
    for v in [-1.0 / 3.0, 0.0, 0.4, 1.0] {
        let p = u_me(v).unwrap();
        assert!(covariant_error(p.z(), p.y, FRAC_1_SQRT_2).abs() < 1e-15);
        let mut rng = RngState::new(11, 0);
        for _ in 0..20 {
            let phi = random_pure_state(FRAC_1_SQRT_2, &mut rng).unwrap();
            let out = apply(&p, &DensityMatrix::from_pure(&phi)).unwrap();
            assert!(out.expectation(&phi).abs() < 1e-14);
        }
    }
    for alpha in [0.0, 0.3, 0.6] {
        assert!(optimal_not(alpha).unwrap().delta > 1e-3, "alpha = {alpha}");
    }
    // Near the ME end Δ ~ s(1 − 4s) is tiny but still positive.
    for alpha in [0.7, 0.707] {
        assert!(optimal_not(alpha).unwrap().delta > 0.0, "alpha = {alpha}");
    }
}

#[test]
fn corners_are_extreme_points() {
    for corner in [CORNER_A, CORNER_B, CORNER_C, CORNER_D] {
        let margins = corner.margins();
        assert_eq!(
            margins.iter().filter(|m| m.abs() < 1e-14).count(),
            3,
            "{corner:?}"
        );
    }
}

#[test]
fn non_covariant_black_box_is_rejected_at_tight_tolerance() {
    let mut rng = RngState::new(12, 0);
    let kraus = covnot_core::haar::random_kraus_set(2, &mut rng);
    assert!(extract_params_with_tol(|rho| kraus.apply(rho), 1e-8).is_err());
    // Covariant part of a covariant mixture is exact.
    let p = ChannelParams::new(0.1, 0.2, 0.05);
    let id = Operator4::identity();
    let e = extract_params(|rho| apply(&p, &rho.conjugate(&id)).unwrap()).unwrap();
    assert!(e.params.max_abs_diff(&p) < 1e-14);
}
