//! Resonant GUP-corrected JCM: closed-form amplitudes, atomic inversion,
//! corrected Rabi frequency, and comparison with exact evolution.
//!
//! Two frequencies are in play and both are exposed:
//! - the amplitude frequency λ√(n+1)[1 − (n+1)φ], the argument of cos/sin in
//!   C_{e,n}(t) and C_{g,n+1}(t);
//! - the inversion (Rabi) frequency Ω(n)(1 − (n+1)φ) with Ω(n) = 2λ√(n+1),
//!   so that W(t) = cos(inversion_frequency · t).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Atom, AtomFieldState, C64, I};
use crate::gup::{
    build_rwa_hamiltonian_rotating, rotating_free_energies, GupCoefficients, InteractionConfig,
};
use crate::linalg::Propagator;

/// |Δ| allowed by the resonant solution, as a fraction of λ.
pub const RESONANCE_TOLERANCE: f64 = 1e-3;

/// Above this value of 4√(n+1)χω/λ the first-order expansion is flagged.
pub const CHI_TERM_WARNING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticAmplitudes {
    /// C_{e,n}(t)
    pub excited: C64,
    /// C_{g,n+1}(t)
    pub ground: C64,
    /// 4√(n+1)χω/λ, the χ term of the excited-state prefactor.
    pub chi_term: f64,
    pub expansion_warning: bool,
}

/// λ√(n+1)[1 − (n+1)φ].
pub fn amplitude_frequency(n: usize, lambda: f64, phi: f64) -> f64 {
    let m = (n + 1) as f64;
    lambda * m.sqrt() * (1.0 - m * phi)
}

/// Standard Rabi frequency Ω(n) = 2λ√(n+1).
pub fn standard_rabi_frequency(n: usize, lambda: f64) -> f64 {
    2.0 * lambda * ((n + 1) as f64).sqrt()
}

/// First-order amplitudes exactly as the closed form reads, no renormalization:
///
/// C_{e,n} = cos(Ωt)[1 − 2(n+1)φ − 4√(n+1)χω/λ],  C_{g,n+1} = −i sin(Ωt)[1 − 2(n+1)φ].
pub fn analytic_amplitudes(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    t: f64,
) -> AnalyticAmplitudes {
    let m = (n + 1) as f64;
    let w = amplitude_frequency(n, cfg.lambda, c.phi);
    let chi_term = 4.0 * m.sqrt() * c.chi * cfg.omega / cfg.lambda;
    let expansion_warning = chi_term.abs() > CHI_TERM_WARNING;
    if expansion_warning {
        log::warn!("4*sqrt(n+1)*chi*omega/lambda = {chi_term:.3e} exceeds {CHI_TERM_WARNING}; first-order expansion is unreliable");
    }
    let common = 1.0 - 2.0 * m * c.phi;
    AnalyticAmplitudes {
        excited: C64::from((w * t).cos() * (common - chi_term)),
        ground: -I * (w * t).sin() * common,
        chi_term,
        expansion_warning,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inversion {
    /// cos(2·amplitude_frequency·t), the O(γ²) form.
    pub closed_form: f64,
    /// |C_e|² − |C_g|² from the unnormalized first-order amplitudes.
    pub from_amplitudes: f64,
}

pub fn atomic_inversion(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    t: f64,
) -> Inversion {
    let amps = analytic_amplitudes(n, cfg, c, t);
    Inversion {
        closed_form: (2.0 * amplitude_frequency(n, cfg.lambda, c.phi) * t).cos(),
        from_amplitudes: amps.excited.norm_sqr() - amps.ground.norm_sqr(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RabiSolution {
    pub n: usize,
    /// Ω(n)(1 − (n+1)φ), the inversion frequency, rad/s.
    pub omega_qg: f64,
    /// λ√(n+1)(1 − (n+1)φ), half of `omega_qg`.
    pub omega_amplitude: f64,
    /// Ω(n) = 2λ√(n+1).
    pub omega_std: f64,
    /// Ω(n)(n+1)φ.
    pub delta_omega: f64,
}

pub fn rabi_shift(n: usize, cfg: &InteractionConfig, c: &GupCoefficients) -> RabiSolution {
    let m = (n + 1) as f64;
    let omega_std = standard_rabi_frequency(n, cfg.lambda);
    RabiSolution {
        n,
        omega_qg: omega_std * (1.0 - m * c.phi),
        omega_amplitude: amplitude_frequency(n, cfg.lambda, c.phi),
        omega_std,
        delta_omega: omega_std * m * c.phi,
    }
}

/// Interaction-picture amplitudes (C_{e,n}, C_{g,n+1}) from exact evolution of
/// |e,n⟩ under the post-RWA Hamiltonian, one pair per time.
pub fn numeric_amplitudes(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    times: &[f64],
    ncut: usize,
) -> Result<Vec<(C64, C64)>> {
    if ncut < n + 2 {
        return Err(Error::Truncation(format!(
            "ncut = {ncut} must be at least n + 2 = {}",
            n + 2
        )));
    }
    let h = build_rwa_hamiltonian_rotating(cfg, c, ncut)?;
    let free = rotating_free_energies(cfg, c, ncut);
    let propagator = Propagator::new(&h)?;
    let psi0 = AtomFieldState::basis(Atom::Excited, n, ncut)?.to_vector();
    let d = ncut + 1;
    let (ie, ig) = (d + n, n + 1);
    times
        .iter()
        .map(|&t| {
            let psi = propagator.apply(t, &psi0)?;
            let ce = psi[ie] * C64::from_polar(1.0, free[ie] * t);
            let cg = psi[ig] * C64::from_polar(1.0, free[ig] * t);
            Ok((ce, cg))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericValidation {
    /// max |analytic − numeric| over both amplitudes and the grid.
    pub max_amp_err: f64,
    /// max |cos(2Ωt) − (|C_e|² − |C_g|²)_numeric|.
    pub max_inv_err: f64,
    /// As `max_amp_err` with the analytic prefactors divided out, i.e. only
    /// the cos/sin time dependence is compared.
    pub max_shape_err: f64,
    /// max | |C_e|² + |C_g|² − 1 | of the analytic amplitudes.
    pub max_norm_defect: f64,
}

/// Compare the closed-form amplitudes with exact evolution over `times`.
/// Requires resonance, |Δ| ≤ 1e-3·λ.
pub fn validate_against_numeric(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    times: &[f64],
    ncut: usize,
) -> Result<NumericValidation> {
    if cfg.detuning.abs() > RESONANCE_TOLERANCE * cfg.lambda.abs() {
        return Err(Error::InvalidInput(format!(
            "resonant comparison needs |detuning| <= {RESONANCE_TOLERANCE:e}*lambda, got {:e}",
            cfg.detuning
        )));
    }
    let numeric = numeric_amplitudes(n, cfg, c, times, ncut)?;
    let mut out = NumericValidation {
        max_amp_err: 0.0,
        max_inv_err: 0.0,
        max_shape_err: 0.0,
        max_norm_defect: 0.0,
    };
    for (&t, &(ce, cg)) in times.iter().zip(&numeric) {
        let a = analytic_amplitudes(n, cfg, c, t);
        let inv = atomic_inversion(n, cfg, c, t);
        out.max_amp_err = out
            .max_amp_err
            .max((a.excited - ce).norm())
            .max((a.ground - cg).norm());
        out.max_inv_err = out
            .max_inv_err
            .max((inv.closed_form - (ce.norm_sqr() - cg.norm_sqr())).abs());
        let w = amplitude_frequency(n, cfg.lambda, c.phi);
        let shape_e = C64::from((w * t).cos());
        let shape_g = -I * (w * t).sin();
        out.max_shape_err = out
            .max_shape_err
            .max((shape_e - ce).norm())
            .max((shape_g - cg).norm());
        out.max_norm_defect = out
            .max_norm_defect
            .max((a.excited.norm_sqr() + a.ground.norm_sqr() - 1.0).abs());
    }
    Ok(out)
}

/// Least-squares fit of W(t) ≈ cos(2Ωt); returns the amplitude frequency Ω.
///
/// A coarse scan over ±`span`·guess picks the basin, golden-section search refines it.
pub fn fit_inversion_frequency(times: &[f64], inversion: &[f64], guess: f64, span: f64) -> f64 {
    let sse = |w: f64| -> f64 {
        times
            .iter()
            .zip(inversion)
            .map(|(&t, &y)| (y - (2.0 * w * t).cos()).powi(2))
            .sum()
    };
    let lo = guess * (1.0 - span);
    let hi = guess * (1.0 + span);
    let samples = 400;
    let step = (hi - lo) / samples as f64;
    let best = (0..=samples)
        .map(|k| lo + k as f64 * step)
        .min_by(|a, b| sse(*a).total_cmp(&sse(*b)))
        .unwrap_or(guess);
    let (mut a, mut b) = (best - step, best + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (sse(x1), sse(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * best.abs() {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = sse(x2);
        }
    }
    0.5 * (a + b)
}

/// Numeric inversion |C_e|² − |C_g|² of |e,n⟩ on a time grid.
pub fn numeric_inversion(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    times: &[f64],
    ncut: usize,
) -> Result<Vec<f64>> {
    Ok(numeric_amplitudes(n, cfg, c, times, ncut)?
        .into_iter()
        .map(|(ce, cg)| ce.norm_sqr() - cg.norm_sqr())
        .collect())
}

/// Evenly spaced grid of `points` times covering `periods` inversion periods.
pub fn rabi_time_grid(n: usize, lambda: f64, phi: f64, periods: f64, points: usize) -> Vec<f64> {
    let w = amplitude_frequency(n, lambda, phi);
    // W(t) = cos(2wt) has period π/w.
    let t_max = periods * std::f64::consts::PI / w;
    (0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::gup::{derive_coefficients, GupParams};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn standard(lambda: f64) -> (InteractionConfig, GupCoefficients) {
        (
            InteractionConfig::resonant(5.0, lambda).unwrap(),
            GupCoefficients::zero(5.0),
        )
    }

    #[test]
    fn initial_condition_and_standard_limit() {
        let (cfg, c) = standard(0.8);
        let a = analytic_amplitudes(3, &cfg, &c, 0.0);
        assert_eq!((a.excited, a.ground), (C64::from(1.0), C64::from(0.0) * -I));
        let t = 1.3;
        let w = 0.8 * 2.0;
        let a = analytic_amplitudes(3, &cfg, &c, t);
        assert_relative_eq!(a.excited.re, (w * t).cos(), max_relative = 1e-15);
        assert_relative_eq!(a.ground.im, -(w * t).sin(), max_relative = 1e-15);
        assert!(!a.expansion_warning);
    }

    #[test]
    fn electroweak_prefactor_at_quarter_cycle() {
        let p = GupParams::from_gamma(1e3, 1.0, 1.0).unwrap();
        let c = derive_coefficients(&p, 1e16).unwrap();
        assert_relative_eq!(c.phi, HBAR * 1e16 * 1e6, max_relative = 1e-12);
        let cfg = InteractionConfig::resonant(1e16, 1.0).unwrap();
        let n = 1;
        let w = amplitude_frequency(n, 1.0, c.phi);
        let t = PI / (2.0 * w);
        let a = analytic_amplitudes(n, &cfg, &c, t);
        let prefactor = 1.0 - 4.0 * c.phi - 4.0 * 2f64.sqrt() * c.chi * cfg.omega / cfg.lambda;
        assert_relative_eq!(a.ground.norm(), 1.0 - 4.0 * c.phi, max_relative = 1e-15);
        assert!(a.excited.norm() <= prefactor * 1e-15);
        // The numeric cosine zero sits at the same time.
        let num = numeric_amplitudes(n, &cfg, &c, &[t], 3).unwrap();
        assert!(num[0].0.norm() < 1e-12);
    }

    #[test]
    fn inversion_values() {
        let (cfg, c) = standard(1.0);
        assert_eq!(atomic_inversion(2, &cfg, &c, 0.0).closed_form, 1.0);
        let w = amplitude_frequency(2, 1.0, 0.0);
        assert_relative_eq!(
            atomic_inversion(2, &cfg, &c, PI / (2.0 * w)).closed_form,
            -1.0
        );
        assert!(atomic_inversion(0, &cfg, &c, PI / 4.0).closed_form.abs() < 1e-15);
    }

    #[test]
    fn rabi_shift_values() {
        let (cfg, c) = standard(1.0);
        assert_eq!(rabi_shift(1, &cfg, &c).delta_omega, 0.0);

        let p = GupParams::from_gamma(1e3, 1.0, 1.0).unwrap();
        let c = derive_coefficients(&p, 1e16).unwrap();
        let cfg = InteractionConfig::resonant(1e16, 1.0).unwrap();
        let r = rabi_shift(1, &cfg, &c);
        assert_relative_eq!(
            r.delta_omega,
            2.0 * 2f64.sqrt() * 2.0 * c.phi,
            max_relative = 1e-14
        );
        assert!((5.0e-12..7.0e-12).contains(&r.delta_omega));
        assert_relative_eq!(r.omega_std - r.omega_qg, r.delta_omega, max_relative = 1e-3);
        assert_relative_eq!(r.omega_qg, 2.0 * r.omega_amplitude, max_relative = 1e-15);

        let cfg2 = InteractionConfig::resonant(1e16, 2.0).unwrap();
        assert_relative_eq!(
            rabi_shift(1, &cfg2, &c).delta_omega,
            2.0 * r.delta_omega,
            max_relative = 1e-15
        );
    }

    #[test]
    fn numeric_matches_standard_jcm() {
        let (cfg, c) = standard(1.0);
        for n in [0, 1, 5] {
            let times = rabi_time_grid(n, 1.0, 0.0, 10.0, 401);
            let v = validate_against_numeric(n, &cfg, &c, &times, n + 2).unwrap();
            assert!(v.max_amp_err < 1e-9, "n = {n}: {v:?}");
            assert!(v.max_inv_err < 1e-9);
        }
    }

    #[test]
    fn printed_amplitudes_deviate_linearly_in_phi() {
        // With χ = 0 the exact amplitudes are cos/sin at exactly the corrected
        // frequency, so only the printed 1 − 2(n+1)φ prefactor differs.
        let cfg = InteractionConfig::resonant(1.0, 1.0).unwrap();
        let n = 1;
        let mut errs = Vec::new();
        for phi in [1e-4, 5e-5, 2.5e-5] {
            let c = GupCoefficients::synthetic(phi, 0.0, 0.0, 1.0);
            let times = rabi_time_grid(n, 1.0, phi, 4.0, 201);
            let v = validate_against_numeric(n, &cfg, &c, &times, n + 3).unwrap();
            assert!(v.max_inv_err < 1e-10, "{v:?}");
            assert!(v.max_shape_err < 1e-10, "{v:?}");
            errs.push(v.max_amp_err);
        }
        for pair in errs.windows(2) {
            assert_relative_eq!(pair[0] / pair[1], 2.0, max_relative = 1e-3);
        }
        assert_relative_eq!(errs[0], 2.0 * 2.0 * 1e-4, max_relative = 1e-3);
    }

    #[test]
    fn norm_defect_is_linear() {
        let cfg = InteractionConfig::resonant(1.0, 1.0).unwrap();
        let t = 0.3;
        let defect = |phi: f64, chi: f64| {
            let a =
                analytic_amplitudes(2, &cfg, &GupCoefficients::synthetic(phi, chi, 0.0, 1.0), t);
            (a.excited.norm_sqr() + a.ground.norm_sqr() - 1.0).abs()
        };
        assert_relative_eq!(
            defect(2e-6, 0.0) / defect(1e-6, 0.0),
            2.0,
            max_relative = 1e-4
        );
        assert_relative_eq!(
            defect(0.0, 2e-6) / defect(0.0, 1e-6),
            2.0,
            max_relative = 1e-4
        );
    }

    #[test]
    fn chi_term_warning() {
        let cfg = InteractionConfig::resonant(1e3, 1.0).unwrap();
        let c = GupCoefficients::synthetic(0.0, 1e-4, 0.0, 1e3);
        assert!(analytic_amplitudes(0, &cfg, &c, 0.0).expansion_warning);
    }

    #[test]
    fn off_resonance_rejected() {
        let cfg = InteractionConfig::detuned(1.0, 0.1, 1.0).unwrap();
        let err =
            validate_against_numeric(0, &cfg, &GupCoefficients::zero(1.0), &[0.0], 3).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let cfg = InteractionConfig::resonant(1.0, 1.0).unwrap();
        let err =
            validate_against_numeric(3, &cfg, &GupCoefficients::zero(1.0), &[0.0], 4).unwrap_err();
        assert!(matches!(err, Error::Truncation(_)));
    }

    #[test]
    fn fitted_frequency_tracks_corrected_value() {
        let cfg = InteractionConfig::resonant(1.0, 1.0).unwrap();
        let n = 2;
        let mut last = f64::INFINITY;
        for phi in [0.0, 5e-4, 1e-3, 2e-3, 3e-3] {
            let c = GupCoefficients::synthetic(phi, 0.0, 0.0, 1.0);
            let times = rabi_time_grid(n, 1.0, 0.0, 10.0, 801);
            let w = numeric_inversion(n, &cfg, &c, &times, n + 3).unwrap();
            let guess = amplitude_frequency(n, 1.0, 0.0);
            let fit = fit_inversion_frequency(&times, &w, guess, 0.02);
            let expect = amplitude_frequency(n, 1.0, phi);
            assert!(
                (fit - expect).abs() / expect < 1e-9 + 10.0 * phi * phi,
                "phi = {phi}"
            );
            assert!(fit < last);
            last = fit;
        }
    }
}
