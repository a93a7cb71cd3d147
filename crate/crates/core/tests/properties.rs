use gup_jcm::dispersive::{photon_added_decomposition, DispersiveConfig};
use gup_jcm::dynamics::numeric_amplitudes;
use gup_jcm::fock::{coherent_state, laguerre, Atom, AtomFieldState, C64};
use gup_jcm::gup::{
    build_full_hamiltonian, build_full_interaction_hamiltonian, build_rwa_hamiltonian,
    build_rwa_hamiltonian_rotating, derive_coefficients, GupCoefficients, GupParams,
    InteractionConfig,
};
use gup_jcm::linalg::HermitianEigen;
use gup_jcm::rwa::{first_order_amplitudes, time_averaged_magnitudes, zeta_lq, zeta_rq};
use gup_jcm::wigner::{coherent_wigner, WignerEvaluator};
use proptest::prelude::*;

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (m - j) as f64 / (j + 1) as f64)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn coefficient_identity(gamma in 1e-6f64..1e4, delta in -2.0f64..2.0, epsilon in -2.0f64..2.0, log_omega in 6.0f64..18.0) {
        let c = derive_coefficients(&GupParams::from_gamma(gamma, delta, epsilon).unwrap(), 10f64.powf(log_omega)).unwrap();
        let scale = c.phi.abs().max(2.0 * c.beta.abs()).max(8.0 * c.chi.abs());
        prop_assert!((8.0 * c.chi - c.phi - 2.0 * c.beta).abs() <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn laguerre_recurrence_matches_direct_sum(m in 0usize..=20, x in -10.0f64..10.0) {
        let terms: Vec<f64> = (0..=m).map(|k| binomial(m, k) * (-x).powi(k as i32) / factorial(k)).collect();
        let direct: f64 = terms.iter().sum();
        let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
        prop_assert!((laguerre(m, x) - direct).abs() <= 1e-12 * magnitude);
    }

    #[test]
    fn builders_are_hermitian(
        phi in 0.0f64..0.05, chi in -1e-3f64..1e-3, xi in 0.0f64..0.5,
        omega in 1.5f64..5.0, detuning in -1.0f64..1.0, lambda in -2.0f64..2.0, ncut in 3usize..12,
    ) {
        let c = GupCoefficients::synthetic(phi, chi, xi, omega);
        let cfg = InteractionConfig::detuned(omega, detuning, lambda).unwrap();
        for h in [
            build_full_interaction_hamiltonian(&cfg, &c, ncut).unwrap(),
            build_full_hamiltonian(&cfg, &c, ncut).unwrap(),
            build_rwa_hamiltonian(&cfg, &c, ncut).unwrap(),
            build_rwa_hamiltonian_rotating(&cfg, &c, ncut).unwrap(),
        ] {
            prop_assert!(h.is_hermitian());
        }
    }

    #[test]
    fn interaction_is_linear_in_lambda(lambda in -3.0f64..3.0, scale in -4.0f64..4.0, xi in 0.0f64..0.5) {
        let c = GupCoefficients::synthetic(0.01, 0.0, xi, 1.0);
        let a = build_full_interaction_hamiltonian(&InteractionConfig::resonant(1.0, lambda).unwrap(), &c, 6).unwrap();
        let b = build_full_interaction_hamiltonian(&InteractionConfig::resonant(1.0, scale * lambda).unwrap(), &c, 6).unwrap();
        let diff = b.sum(&a.scaled(C64::from(-scale)));
        prop_assert!(diff.max_abs() <= 1e-14 * b.max_abs().max(1.0));
    }

    #[test]
    fn evolution_is_unitary(
        phi in 0.0f64..0.05, chi in -1e-3f64..1e-3, lambda in 0.1f64..2.0, detuning in -1.0f64..1.0,
        t in 0.0f64..50.0, re in -1.0f64..1.0, im in -1.0f64..1.0,
    ) {
        let ncut = 16;
        let cfg = InteractionConfig::detuned(3.0, detuning, lambda).unwrap();
        let c = GupCoefficients::synthetic(phi, chi, 0.0, 3.0);
        let h = build_rwa_hamiltonian_rotating(&cfg, &c, ncut).unwrap();
        let psi0 = AtomFieldState::product(Atom::Excited, &coherent_state(C64::new(re, im), ncut, 1e-6).unwrap()).to_vector();
        let psi = HermitianEigen::new(&h).unwrap().evolve(t, &psi0);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimensionless_rescaling_leaves_amplitudes_invariant(s in 0.01f64..100.0, n in 0usize..5, tau in 0.0f64..20.0) {
        // Frequencies ×s with times ×1/s give the same amplitudes when φ, χ are held fixed.
        let c1 = GupCoefficients::synthetic(1e-3, 0.0, 0.0, 1.0);
        let cs = GupCoefficients::synthetic(1e-3, 0.0, 0.0, s);
        let a = numeric_amplitudes(n, &InteractionConfig::resonant(1.0, 0.7).unwrap(), &c1, &[tau], n + 2).unwrap();
        let b = numeric_amplitudes(n, &InteractionConfig::resonant(s, 0.7 * s).unwrap(), &cs, &[tau / s], n + 2).unwrap();
        prop_assert!((a[0].0 - b[0].0).norm() < 1e-10);
        prop_assert!((a[0].1 - b[0].1).norm() < 1e-10);
    }

    #[test]
    fn zeta_matches_magnitude_ratios(
        n in 1usize..100, log_gamma in -5.0f64..3.0, delta in 0.1f64..1.0, epsilon in 0.0f64..1.0,
        log_omega in 9.0f64..17.0, log_detuning in 3.0f64..5.0,
    ) {
        prop_assume!((3.0 * delta * delta - 2.0 * epsilon).abs() > 1e-3);
        let p = GupParams::from_gamma(10f64.powf(log_gamma), delta, epsilon).unwrap();
        let omega = 10f64.powf(log_omega);
        let cfg = InteractionConfig::detuned(omega, 10f64.powf(log_detuning), 1.0).unwrap();
        let c = derive_coefficients(&p, omega).unwrap();
        let m = time_averaged_magnitudes(n, &cfg, &c).unwrap();
        let lq = zeta_lq(n, &cfg, &p).unwrap().abs();
        let rq = zeta_rq(n, &cfg, &p).unwrap().abs();
        prop_assert!((m.m_plus2 / m.m_plus1_t2 - lq).abs() <= 1e-12 * lq);
        prop_assert!((m.m_minus1 / m.m_plus1_t2 - rq).abs() <= 1e-12 * rq);
    }

    #[test]
    fn linear_gup_channel_scales_with_gamma(n in 0usize..20, log_gamma in -3.0f64..2.0, t in 0.1f64..100.0) {
        let omega = 1e12;
        let cfg = InteractionConfig::detuned(omega, 1e4, 1.0).unwrap();
        let amp = |g: f64| {
            let c = derive_coefficients(&GupParams::from_gamma(g, 1.0, 1.0).unwrap(), omega).unwrap();
            first_order_amplitudes(n, &cfg, &c, t).unwrap()
        };
        let g = 10f64.powf(log_gamma);
        let (a, b) = (amp(g), amp(2.0 * g));
        prop_assert!((b.c_gn_plus2 - a.c_gn_plus2 * 2.0).norm() <= 1e-12 * b.c_gn_plus2.norm());
        prop_assert!(a.c_gn_minus1 == b.c_gn_minus1);
        // The GUP term of the |g,n+1⟩ channel grows as γ².
        let t2 = |g: f64| {
            let c = derive_coefficients(&GupParams::from_gamma(g, 1.0, 1.0).unwrap(), omega).unwrap();
            time_averaged_magnitudes(n, &cfg, &c).unwrap().m_plus1_t2
        };
        prop_assert!((t2(2.0 * g) / t2(g) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_is_normalized(re in -1.5f64..1.5, im in -1.5f64..1.5, phi in 0.0f64..1e-3, t in 0.0f64..5.0) {
        let d = DispersiveConfig::new(1.0, phi, C64::new(re, im), t, 40);
        prop_assume!(d.valid_linear);
        for atom in [Atom::Ground, Atom::Excited] {
            let state = photon_added_decomposition(&d, atom).unwrap().state(40).unwrap();
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_wigner_closed_form(re in -1.5f64..1.5, im in -1.5f64..1.5, x in -4.0f64..4.0, y in -4.0f64..4.0) {
        let eval = WignerEvaluator::new(30, 4.0 * 2f64.sqrt()).unwrap();
        let alpha = C64::new(re, im);
        let psi = coherent_state(alpha, 30, 1e-12).unwrap();
        let z = C64::new(x, y);
        prop_assert!((eval.value(psi.amps(), z).unwrap() - coherent_wigner(alpha, z)).abs() < 1e-9);
    }
}
