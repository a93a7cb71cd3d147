//! The data-producing subcommands. Each writes its artifacts into an [`Output`].

use anyhow::{bail, Result};
use gup_jcm::dispersive::{
    coherent_moments, evolve_dispersive_exact, photon_added_decomposition, DispersiveConfig,
    PhotonAddedDecomposition,
};
use gup_jcm::dynamics::{
    atomic_inversion, fit_inversion_frequency, numeric_inversion, rabi_shift, rabi_time_grid,
    standard_rabi_frequency, validate_against_numeric, RabiSolution,
};
use gup_jcm::fock::{coherent_state, DEFAULT_TAIL_TOL};
use gup_jcm::rwa::zeta_map;
use gup_jcm::wigner::{wigner_difference, wigner_precision_ratio};
use gup_jcm::{derive_coefficients, Atom, GupCoefficients, InteractionConfig, C64};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::Output;

/// ω at which the ζ maps are summarized.
pub const ZETA_SLICE_OMEGA: f64 = 1e16;

#[derive(Serialize)]
struct ShiftRow {
    n: usize,
    omega_std: f64,
    omega_qg: f64,
    omega_amplitude: f64,
    delta_omega: f64,
}

impl From<RabiSolution> for ShiftRow {
    fn from(s: RabiSolution) -> Self {
        Self {
            n: s.n,
            omega_std: s.omega_std,
            omega_qg: s.omega_qg,
            omega_amplitude: s.omega_amplitude,
            delta_omega: s.delta_omega,
        }
    }
}

#[derive(Serialize)]
struct InversionRow {
    t: f64,
    closed_form: f64,
    from_amplitudes: f64,
    numeric: f64,
    standard: f64,
}

#[derive(Serialize)]
struct RabiSummary {
    coefficients: GupCoefficients,
    solution: RabiSolution,
    max_amplitude_error: f64,
    max_inversion_error: f64,
    max_shape_error: f64,
    fitted_omega_amplitude: f64,
}

pub fn rabi(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let r = &cfg.rabi;
    if r.points < 2 {
        bail!("rabi.points must be at least 2, got {}", r.points);
    }
    let c = derive_coefficients(&cfg.gup.params()?, r.omega)?;
    let icfg = InteractionConfig::resonant(r.omega, r.lambda)?;
    out.csv(
        "rabi_shift.csv",
        r.n_values
            .iter()
            .map(|&n| ShiftRow::from(rabi_shift(n, &icfg, &c))),
    )?;

    let times = rabi_time_grid(r.n, r.lambda, c.phi, r.periods, r.points);
    let numeric = numeric_inversion(r.n, &icfg, &c, &times, r.n + 2)?;
    let omega_std = standard_rabi_frequency(r.n, r.lambda);
    out.csv(
        "rabi_inversion.csv",
        times.iter().zip(&numeric).map(|(&t, &num)| {
            let inv = atomic_inversion(r.n, &icfg, &c, t);
            InversionRow {
                t,
                closed_form: inv.closed_form,
                from_amplitudes: inv.from_amplitudes,
                numeric: num,
                standard: (omega_std * t).cos(),
            }
        }),
    )?;

    let solution = rabi_shift(r.n, &icfg, &c);
    let v = validate_against_numeric(r.n, &icfg, &c, &times, r.n + 2)?;
    let summary = RabiSummary {
        coefficients: c,
        solution,
        max_amplitude_error: v.max_amp_err,
        max_inversion_error: v.max_inv_err,
        max_shape_error: v.max_shape_err,
        fitted_omega_amplitude: fit_inversion_frequency(
            &times,
            &numeric,
            solution.omega_amplitude,
            0.1,
        ),
    };
    out.json("rabi_summary.json", &summary)?;
    println!(
        "rabi: n = {}, phi = {:e}, delta_omega = {:e} rad/s",
        r.n, c.phi, solution.delta_omega
    );
    Ok(())
}

/// Dispersive configuration and its decomposition for the configured run.
fn dispersive_setup(
    cfg: &RunConfig,
) -> Result<(GupCoefficients, DispersiveConfig, PhotonAddedDecomposition)> {
    let s = &cfg.dispersive;
    let c = derive_coefficients(&cfg.gup.params()?, s.omega)?;
    let d = DispersiveConfig::new(s.mu, c.phi, s.alpha, s.t, s.ncut);
    let dec = photon_added_decomposition(&d, s.atom)?;
    Ok((c, d, dec))
}

#[derive(Serialize)]
struct StateRow {
    n: usize,
    exact_re: f64,
    exact_im: f64,
    decomposition_re: f64,
    decomposition_im: f64,
}

#[derive(Serialize)]
struct FidelityRow {
    t: f64,
    linearity_parameter: f64,
    infidelity: f64,
    bound: f64,
}

#[derive(Serialize)]
struct DecompositionReport<'a> {
    coefficients: GupCoefficients,
    config: DispersiveConfig,
    linearity_parameter: f64,
    time_bound: f64,
    decomposition: &'a PhotonAddedDecomposition,
    /// |pacs1_amp|·𝒩
    pacs1_scaled: f64,
    mean_n2: f64,
    mean_n4: f64,
    infidelity: f64,
    /// 10·(2φμt)²·⟨n⁴⟩
    infidelity_bound: f64,
}

/// 10·(2φμt)²·⟨n⁴⟩, the admissible infidelity of the decomposition.
pub fn infidelity_bound(d: &DispersiveConfig) -> f64 {
    let s = 2.0 * d.phi * d.mu * d.t;
    10.0 * s * s * coherent_moments(d.alpha).1
}

/// 1 − |⟨exact|decomposition⟩|² at the configured time.
pub fn decomposition_infidelity(d: &DispersiveConfig, atom: Atom) -> Result<f64> {
    let exact = evolve_dispersive_exact(d, atom)?;
    let approx = photon_added_decomposition(d, atom)?.state(d.ncut)?;
    Ok(1.0 - exact.fidelity(&approx))
}

pub fn dispersive(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let s = &cfg.dispersive;
    if s.curve_points < 2 {
        bail!(
            "dispersive.curve_points must be at least 2, got {}",
            s.curve_points
        );
    }
    let (c, d, dec) = dispersive_setup(cfg)?;
    let exact = evolve_dispersive_exact(&d, s.atom)?;
    let approx = dec.state(s.ncut)?;
    out.csv(
        "dispersive_state.csv",
        (0..=s.ncut).map(|n| {
            let (e, a) = (exact.amp(s.atom, n), approx.amp(s.atom, n));
            StateRow {
                n,
                exact_re: e.re,
                exact_im: e.im,
                decomposition_re: a.re,
                decomposition_im: a.im,
            }
        }),
    )?;

    let mut curve = Vec::with_capacity(s.curve_points);
    for k in 0..s.curve_points {
        let t = s.t * k as f64 / (s.curve_points - 1) as f64;
        let dk = DispersiveConfig::new(d.mu, d.phi, d.alpha, t, d.ncut);
        curve.push(FidelityRow {
            t,
            linearity_parameter: dk.linearity_parameter(),
            infidelity: decomposition_infidelity(&dk, s.atom)?,
            bound: infidelity_bound(&dk),
        });
    }
    out.csv("fidelity_vs_t.csv", curve)?;

    let (n2, n4) = coherent_moments(d.alpha);
    let report = DecompositionReport {
        coefficients: c,
        config: d,
        linearity_parameter: d.linearity_parameter(),
        time_bound: d.time_bound(),
        decomposition: &dec,
        pacs1_scaled: dec.pacs1_amp.norm() * dec.normalization,
        mean_n2: n2,
        mean_n4: n4,
        infidelity: 1.0 - exact.fidelity(&approx),
        infidelity_bound: infidelity_bound(&d),
    };
    out.json("decomposition.json", &report)?;
    println!(
        "dispersive: phi = {:e}, |pacs1|*N = {:e}, infidelity = {:e}",
        c.phi, report.pacs1_scaled, report.infidelity
    );
    Ok(())
}

#[derive(Serialize)]
struct GridRow {
    x: f64,
    y: f64,
    delta_w: f64,
}

/// Summary of a Wigner difference run.
#[derive(Debug, Clone, Serialize)]
pub struct WignerSummary {
    pub reference_alpha: C64,
    pub phi: f64,
    /// 2φμt
    pub perturbation_scale: f64,
    pub max_abs_delta: f64,
    pub argmax: (f64, f64),
    pub reference_at_max: f64,
    pub reference_peak: f64,
    /// max|ΔW| / (2/π)
    pub relative_to_coherent_peak: f64,
    /// max|ΔW| / max W_ref
    pub precision_ratio_peak: f64,
    /// max|ΔW| / W_ref at the argmax
    pub precision_ratio_pointwise: f64,
    pub integral_delta: f64,
}

/// ΔW between the dispersive field state and the coherent state the
/// uncorrected evolution produces (|αe^{∓iμt}⟩).
pub fn wigner_summary(cfg: &RunConfig) -> Result<(WignerSummary, gup_jcm::wigner::WignerGrid)> {
    let (c, d, dec) = dispersive_setup(cfg)?;
    let psi = if cfg.wigner.self_reference {
        coherent_state(dec.beta, d.ncut, DEFAULT_TAIL_TOL)?
    } else {
        dec.field_state(d.ncut)?
    };
    let diff = wigner_difference(&psi, dec.beta, &cfg.wigner.grid)?;
    let summary = WignerSummary {
        reference_alpha: dec.beta,
        phi: c.phi,
        perturbation_scale: 2.0 * c.phi * d.mu * d.t,
        max_abs_delta: diff.max_abs,
        argmax: diff.argmax,
        reference_at_max: diff.reference_at_max,
        reference_peak: diff.reference_peak,
        relative_to_coherent_peak: diff.max_abs / std::f64::consts::FRAC_2_PI,
        precision_ratio_peak: wigner_precision_ratio(diff.max_abs, diff.reference_peak),
        precision_ratio_pointwise: if diff.reference_at_max > 0.0 {
            wigner_precision_ratio(diff.max_abs, diff.reference_at_max)
        } else {
            f64::INFINITY
        },
        integral_delta: diff.delta.integral(),
    };
    Ok((summary, diff.delta))
}

pub fn wigner_diff(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let (summary, delta) = wigner_summary(cfg)?;
    out.csv(
        "wigner_diff.csv",
        delta
            .im_axis
            .iter()
            .zip(&delta.values)
            .flat_map(|(&y, row)| {
                delta
                    .re_axis
                    .iter()
                    .zip(row)
                    .map(move |(&x, &delta_w)| GridRow { x, y, delta_w })
            }),
    )?;
    out.json("wigner_summary.json", &summary)?;
    println!(
        "wigner-diff: max|dW| = {:e} at ({}, {}), ratio to peak = {:e}",
        summary.max_abs_delta, summary.argmax.0, summary.argmax.1, summary.precision_ratio_peak
    );
    Ok(())
}

#[derive(Serialize)]
struct ZetaRow {
    omega: f64,
    detuning: f64,
    zeta_lq: f64,
    zeta_rq: f64,
}

#[derive(Serialize)]
struct ZetaSummary {
    slice_omega: f64,
    max_zeta_lq_on_slice: f64,
    max_zeta_rq_on_slice: f64,
    min_zeta_lq: f64,
    max_zeta_lq: f64,
    min_zeta_rq: f64,
    max_zeta_rq: f64,
}

pub fn zeta_maps(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let map = zeta_map(&cfg.zeta)?;
    let mut rows = Vec::with_capacity(map.detuning_axis.len() * map.omega_axis.len());
    for (i, &detuning) in map.detuning_axis.iter().enumerate() {
        for (j, &omega) in map.omega_axis.iter().enumerate() {
            rows.push(ZetaRow {
                omega,
                detuning,
                zeta_lq: map.zeta_lq[i][j],
                zeta_rq: map.zeta_rq[i][j],
            });
        }
    }
    let extent = |f: fn(&ZetaRow) -> f64| {
        rows.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (min_lq, max_lq) = extent(|r| r.zeta_lq);
    let (min_rq, max_rq) = extent(|r| r.zeta_rq);
    let (slice_omega, lq, rq) = map.slice_at_omega(ZETA_SLICE_OMEGA);
    let summary = ZetaSummary {
        slice_omega,
        max_zeta_lq_on_slice: lq.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        max_zeta_rq_on_slice: rq.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_zeta_lq: min_lq,
        max_zeta_lq: max_lq,
        min_zeta_rq: min_rq,
        max_zeta_rq: max_rq,
    };
    out.csv("zeta_map.csv", rows)?;
    out.json("zeta_map.json", &map)?;
    out.json("zeta_summary.json", &summary)?;
    println!(
        "zeta-maps: at omega = {:e}, max zeta_LQ = {:e}, max zeta_RQ = {:e}",
        slice_omega, summary.max_zeta_lq_on_slice, summary.max_zeta_rq_on_slice
    );
    Ok(())
}
