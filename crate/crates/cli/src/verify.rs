//! Self-check suite behind `gupjcm verify`. Each check has pinned parameters
//! and tolerances; the acceptance tests call the same functions.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_2_PI, PI};
use std::time::Instant;

use anyhow::Result;
use gup_jcm::dispersive::{
    commutator_check, dyson_consistency_check, evolve_dispersive_exact, photon_added_decomposition,
    DispersiveConfig, DysonMethod,
};
use gup_jcm::dynamics::{rabi_shift, rabi_time_grid, validate_against_numeric};
use gup_jcm::fock::{coherent_state, photon_added_coherent_state, FockVector, DEFAULT_TAIL_TOL};
use gup_jcm::rwa::{
    perturbation_cross_check, zeta_lq, zeta_map, zeta_rq, CrossCheckOptions, ZetaMapSpec,
};
use gup_jcm::wigner::{coherent_wigner, fock_wigner, GridSpec, WignerEvaluator};
use gup_jcm::{
    constants::HBAR, derive_coefficients, Atom, AtomFieldState, GupCoefficients, GupParams,
    InteractionConfig, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{
    decomposition_infidelity, infidelity_bound, wigner_summary, ZETA_SLICE_OMEGA,
};
use crate::config::{Preset, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<&'static str, f64>,
}

impl CheckResult {
    fn new(id: &'static str, title: &'static str) -> Self {
        Self {
            id,
            title,
            passed: true,
            detail: String::new(),
            metrics: BTreeMap::new(),
        }
    }

    /// Record a metric and fold `ok` into the verdict.
    fn require(&mut self, name: &'static str, value: f64, ok: bool, requirement: &str) {
        self.metrics.insert(name, value);
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        let mark = if ok { "ok" } else { "FAILED" };
        self.detail
            .push_str(&format!("{name} = {value:.4e} ({requirement}: {mark})"));
        self.passed &= ok;
    }
}

pub type CheckFn = fn(&RunConfig) -> Result<CheckResult>;

/// All checks in table order.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("1", standard_oracle),
    ("2", rabi_frequency_shift),
    ("3", coefficient_identity),
    ("4", effective_commutator),
    ("5", dispersive_resummation),
    ("6", photon_added_fidelity),
    ("7", wigner_closed_forms),
    ("8", wigner_magnitude),
    ("9", zeta_maps),
    ("10", perturbation_scaling),
    ("D", dyson_consistency),
];

/// Decades between `value` and `target`.
pub fn decades(value: f64, target: f64) -> f64 {
    (value / target).log10().abs()
}

fn slope(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// γ = 0 numerics reproduce cos/sin amplitudes over 10 Rabi periods.
pub fn standard_oracle(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("1", "standard JCM oracle");
    let c = GupCoefficients::zero(1e16);
    let cfg = InteractionConfig::resonant(1e16, 1.0)?;
    let mut worst: f64 = 0.0;
    for n in [0usize, 1, 5, 20] {
        // 10 amplitude periods are 20 inversion periods.
        let times = rabi_time_grid(n, cfg.lambda, 0.0, 20.0, 2001);
        worst = worst.max(validate_against_numeric(n, &cfg, &c, &times, n + 2)?.max_amp_err);
    }
    r.require("max_amp_err", worst, worst < 1e-9, "< 1e-9");
    Ok(r)
}

/// ΔΩ at ω = 1e16, γ = 1e3, n = 1, λ = 1 is ~1e-12 and equals Ω(n)(n+1)φ.
pub fn rabi_frequency_shift(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("2", "corrected Rabi frequency");
    let (omega, gamma, n) = (1e16, 1e3, 1usize);
    let c = derive_coefficients(&GupParams::from_gamma(gamma, 1.0, 1.0)?, omega)?;
    let s = rabi_shift(n, &InteractionConfig::resonant(omega, 1.0)?, &c);
    let phi = HBAR * omega * gamma * gamma * (3.0 - 2.0);
    let closed = 2.0 * ((n + 1) as f64).sqrt() * (n + 1) as f64 * phi;
    r.require(
        "delta_omega",
        s.delta_omega,
        decades(s.delta_omega, 1e-12) <= 1.0,
        "within 1 decade of 1e-12",
    );
    let rel = (s.delta_omega - closed).abs() / closed;
    r.require("closed_form_rel_err", rel, rel <= 1e-12, "<= 1e-12");
    Ok(r)
}

/// 8χ = φ + 2β over seeded random draws.
pub fn coefficient_identity(cfg: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("3", "coefficient identity");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.verify.identity_draws {
        let gamma = 10f64.powf(rng.random_range(-6.0..4.0));
        let delta = rng.random_range(-2.0..2.0);
        let epsilon = rng.random_range(-2.0..2.0);
        let omega = 10f64.powf(rng.random_range(6.0..18.0));
        let c = derive_coefficients(&GupParams::from_gamma(gamma, delta, epsilon)?, omega)?;
        let scale = c.phi.abs().max(2.0 * c.beta.abs()).max(8.0 * c.chi.abs());
        if scale > 0.0 {
            worst = worst.max((8.0 * c.chi - c.phi - 2.0 * c.beta).abs() / (f64::EPSILON * scale));
        }
    }
    r.metrics.insert("draws", cfg.verify.identity_draws as f64);
    r.require("max_residual_in_ulps", worst, worst <= 4.0, "<= 4 eps");
    Ok(r)
}

/// μ[Â,Â†] against H_eff; the residual scales as φ².
pub fn effective_commutator(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("4", "effective-Hamiltonian commutator");
    let cfg = InteractionConfig::detuned(1e3, 100.0, 1.0)?;
    let res = |phi: f64| -> Result<f64> {
        Ok(commutator_check(&cfg, &GupCoefficients::synthetic(phi, 0.0, 0.0, 1e3), 20)?.residual)
    };
    let zero = res(0.0)?;
    r.require(
        "residual_phi0_over_mu",
        zero / cfg.mu(),
        zero <= 1e-12 * cfg.mu(),
        "<= 1e-12",
    );
    let (a, b) = (res(2e-6)?, res(1e-6)?);
    let s = slope(a, b);
    r.require("slope", s, (s - 2.0).abs() <= 0.1, "2.0 +- 0.1");
    Ok(r)
}

/// φ = 0 dispersive evolution of |g⟩|1⟩ is the rotated coherent state.
pub fn dispersive_resummation(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("5", "dispersive re-summation");
    let (mu, t, ncut) = (1e5, 1e-3, 30);
    let alpha = C64::new(1.0, 0.0);
    let psi = evolve_dispersive_exact(
        &DispersiveConfig::new(mu, 0.0, alpha, t, ncut),
        Atom::Ground,
    )?;
    let target = coherent_state(alpha * C64::from_polar(1.0, mu * t), ncut, DEFAULT_TAIL_TOL)?;
    let infidelity = 1.0 - psi.fidelity(&AtomFieldState::product(Atom::Ground, &target));
    r.require("infidelity", infidelity, infidelity < 1e-10, "< 1e-10");
    Ok(r)
}

/// Overlap of the exact state with its photon-added decomposition, and k₁, k₂.
pub fn photon_added_fidelity(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("6", "photon-added decomposition");
    let cfg = RunConfig::preset(Preset::Fig1);
    let s = &cfg.dispersive;
    let c = derive_coefficients(&cfg.gup.params()?, s.omega)?;
    let d = DispersiveConfig::new(s.mu, c.phi, s.alpha, s.t, s.ncut);
    let infidelity = decomposition_infidelity(&d, s.atom)?;
    let bound = infidelity_bound(&d);
    r.metrics.insert("bound", bound);
    r.require(
        "infidelity",
        infidelity,
        infidelity <= bound,
        "<= 10 (2 phi mu t)^2 <n^4>",
    );
    let dec = photon_added_decomposition(&d, s.atom)?;
    let k1_err = (dec.k1 - 2f64.sqrt()).abs();
    let k2_err = (dec.k2 - 7f64.sqrt()).abs();
    r.require("k1_err", k1_err, k1_err <= 1e-10, "<= 1e-10");
    r.require("k2_err", k2_err, k2_err <= 1e-10, "<= 1e-10");
    Ok(r)
}

/// Coherent and Fock grids against closed forms, normalization, and
/// negativity of |1, 1⟩.
pub fn wigner_closed_forms(cfg: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("7", "Wigner closed forms");
    let ncut = 30;
    let spec = GridSpec::square(4.0, cfg.verify.wigner_points);
    let alphas = [C64::new(1.0, 0.0), C64::new(-0.6, 0.8)];
    let mut states: Vec<FockVector> = alphas
        .iter()
        .map(|&a| coherent_state(a, ncut, DEFAULT_TAIL_TOL))
        .collect::<gup_jcm::Result<_>>()?;
    for n in 0..=5 {
        states.push(FockVector::number(n, ncut)?);
    }
    states.push(photon_added_coherent_state(C64::new(1.0, 0.0), 1, ncut)?);
    let eval = WignerEvaluator::new(ncut, spec.max_radius())?;
    let refs: Vec<_> = states.iter().map(|s| s.amps()).collect();
    let grids = eval.grids(&refs, &spec)?;

    let mut max_err: f64 = 0.0;
    let mut max_norm_err: f64 = 0.0;
    for (k, g) in grids.iter().enumerate() {
        for (j, &y) in g.im_axis.iter().enumerate() {
            for (i, &x) in g.re_axis.iter().enumerate() {
                let z = C64::new(x, y);
                let exact = match k {
                    0 | 1 => coherent_wigner(alphas[k], z),
                    k if k < 8 => fock_wigner(k - 2, z),
                    _ => continue,
                };
                max_err = max_err.max((g.values[j][i] - exact).abs());
            }
        }
        max_norm_err = max_norm_err.max((g.integral() - 1.0).abs());
    }
    r.require("max_closed_form_err", max_err, max_err <= 1e-8, "<= 1e-8");
    r.require(
        "max_integral_err",
        max_norm_err,
        max_norm_err <= 1e-3,
        "<= 1e-3",
    );
    let min_pacs = grids.last().expect("pacs grid").min();
    r.require("min_w_pacs", min_pacs, min_pacs < 0.0, "< 0");
    Ok(r)
}

/// `fig1` preset: max|ΔW| against the 2φμt scale and the precision ratio.
pub fn wigner_magnitude(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("8", "Wigner difference magnitude");
    let cfg = RunConfig::preset(Preset::Fig1);
    let (s, _) = wigner_summary(&cfg)?;
    r.metrics.insert("max_abs_delta", s.max_abs_delta);
    r.metrics.insert("perturbation_scale", s.perturbation_scale);
    r.metrics.insert("argmax_x", s.argmax.0);
    r.metrics.insert("argmax_y", s.argmax.1);
    r.metrics
        .insert("precision_ratio_pointwise", s.precision_ratio_pointwise);
    let rel = s.max_abs_delta / FRAC_2_PI;
    r.require(
        "relative_to_2_over_pi",
        rel,
        decades(rel, s.perturbation_scale) <= 1.0 && (1e-6..=1e-3).contains(&rel),
        "within 1 decade of 2 phi mu t and of [1e-5, 1e-4]",
    );
    r.require(
        "precision_ratio_peak",
        s.precision_ratio_peak,
        decades(s.precision_ratio_peak, 1e-3) <= 1.0,
        "within 1 decade of 1e-3",
    );
    Ok(r)
}

/// ζ maps on the ω = 1e16 slice and desk-scale spot values.
pub fn zeta_maps(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("9", "zeta maps");
    let fig2 = zeta_map(&ZetaMapSpec::fig2())?;
    let fig3 = zeta_map(&ZetaMapSpec::fig3())?;
    let (w2, lq, _) = fig2.slice_at_omega(ZETA_SLICE_OMEGA);
    let (w3, _, rq) = fig3.slice_at_omega(ZETA_SLICE_OMEGA);
    let max_lq = lq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_rq = rq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let on_slice =
        (w2 / ZETA_SLICE_OMEGA - 1.0).abs() < 1e-9 && (w3 / ZETA_SLICE_OMEGA - 1.0).abs() < 1e-9;
    r.require(
        "max_zeta_lq_fig2",
        max_lq,
        on_slice && max_lq < 1.0,
        "< 1 at omega = 1e16",
    );
    r.require(
        "max_zeta_rq_fig3",
        max_rq,
        on_slice && max_rq < 1.0,
        "< 1 at omega = 1e16",
    );
    let spot = InteractionConfig::detuned(1e16, 1e4, 1.0)?;
    let lq_spot = zeta_lq(50, &spot, &ZetaMapSpec::fig2().params()?)?;
    let rq_spot = zeta_rq(50, &spot, &ZetaMapSpec::fig3().params()?)?;
    r.require(
        "spot_zeta_lq",
        lq_spot,
        (lq_spot / 4e-4 - 1.0).abs() <= 0.2,
        "4e-4 within 20%",
    );
    r.require(
        "spot_zeta_rq",
        rq_spot,
        (rq_spot / 4e-4 - 1.0).abs() <= 0.2,
        "4e-4 within 20%",
    );
    Ok(r)
}

/// First-order amplitudes against integration; relative discrepancy ∝ λ².
pub fn perturbation_scaling(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("10", "perturbation cross-check");
    let c = GupCoefficients::synthetic(0.05, 0.0, 0.1, 1.0);
    let err = |lambda: f64| -> Result<f64> {
        let cfg = InteractionConfig::detuned(1.0, 0.3, lambda)?;
        Ok(
            perturbation_cross_check(2, &cfg, &c, 20.0, 7, CrossCheckOptions::default())?
                .max_rel_err,
        )
    };
    let e = [err(2e-4)?, err(1e-4)?, err(5e-5)?];
    r.metrics.insert("rel_err_lambda_1e-4", e[1]);
    let (s1, s2) = (slope(e[0], e[1]), slope(e[1], e[2]));
    r.require("slope_coarse", s1, (s1 - 2.0).abs() <= 0.1, "2.0 +- 0.1");
    r.require("slope_fine", s2, (s2 - 2.0).abs() <= 0.1, "2.0 +- 0.1");
    Ok(r)
}

/// Interaction-picture evolution against e^{−iH_eff t}: the defect falls as
/// (λ/Δ)², averaged over one fast period.
pub fn dyson_consistency(_: &RunConfig) -> Result<CheckResult> {
    let mut r = CheckResult::new("D", "Dyson consistency");
    let c = GupCoefficients::zero(1e3);
    let alpha = C64::new(1.0, 0.0);
    let defect = |ratio: f64| -> Result<f64> {
        let cfg = InteractionConfig::detuned(1e3, 1.0 / ratio, 1.0)?;
        let period = 2.0 * PI / cfg.detuning;
        let mut sum = 0.0;
        for k in 0..16 {
            let t = 10.0 / cfg.mu() + period * k as f64 / 16.0;
            sum += 1.0
                - dyson_consistency_check(
                    &cfg,
                    &c,
                    16,
                    t,
                    alpha,
                    Atom::Ground,
                    DysonMethod::Spectral,
                )?
                .fidelity;
        }
        Ok(sum / 16.0)
    };
    let (coarse, fine) = (defect(2e-3)?, defect(1e-3)?);
    r.require(
        "mean_infidelity",
        fine,
        fine < 1e-5,
        "< 1e-5 at lambda/Delta = 1e-3",
    );
    let s = slope(coarse, fine);
    r.require("slope", s, (s - 2.0).abs() <= 0.2, "2.0 +- 0.2");
    Ok(r)
}

/// Run every check; errors count as failures.
pub fn run_all(cfg: &RunConfig) -> Vec<(CheckResult, f64)> {
    CHECKS
        .iter()
        .map(|&(id, check)| {
            let start = Instant::now();
            let result = check(cfg).unwrap_or_else(|e| CheckResult {
                id,
                title: "error",
                passed: false,
                detail: format!("{e:#}"),
                metrics: BTreeMap::new(),
            });
            (result, start.elapsed().as_secs_f64())
        })
        .collect()
}

pub fn print_table(results: &[(CheckResult, f64)]) {
    println!(
        "{:<3} {:<36} {:<6} {:>8}  detail",
        "id", "check", "result", "time_s"
    );
    for (r, secs) in results {
        println!(
            "{:<3} {:<36} {:<6} {:>8.3}  {}",
            r.id,
            r.title,
            if r.passed { "PASS" } else { "FAIL" },
            secs,
            r.detail
        );
    }
}
