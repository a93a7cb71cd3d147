//! Validity of the rotating-wave approximation: first-order amplitudes from
//! |e,n⟩ under the full interaction, their time-averaged magnitudes, and the
//! ratios
//!
//! ```text
//! ζ_LQ = |avg C_{g,n+2}| / T₂(C_{g,n+1})   (linear GUP vs quadratic GUP)
//! ζ_RQ = |avg C_{g,n−1}| / T₂(C_{g,n+1})   (counter-rotating vs quadratic GUP)
//! ```
//!
//! where T₂ is the GUP part of |avg C_{g,n+1}|.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::fock::{Atom, AtomFieldState, OperatorMatrix, C64, ZERO};
use crate::gup::{
    build_full_interaction_hamiltonian, GupCoefficients, GupParams, InteractionConfig,
};
use crate::integrate::InteractionPicture;

/// Largest λ·max(√n, 1)/min(|Δ|, |2ω−ω₀|, ω+ω₀) accepted by the cross-check.
pub const PERTURBATIVE_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationAmplitudes {
    pub c_gn_minus1: C64,
    pub c_gn_plus1: C64,
    pub c_gn_plus2: C64,
    pub t: f64,
    pub n: usize,
}

fn check_denominators(cfg: &InteractionConfig) -> Result<()> {
    if cfg.omega == cfg.omega0 {
        return Err(Error::SingularDenominator(
            "omega = omega0 (resonance)".into(),
        ));
    }
    if cfg.omega0 == 2.0 * cfg.omega {
        return Err(Error::SingularDenominator(
            "omega0 = 2*omega (two-photon resonance)".into(),
        ));
    }
    Ok(())
}

/// (e^{iwt} − 1)/w
fn phase_ratio(w: f64, t: f64) -> C64 {
    (C64::from_polar(1.0, w * t) - 1.0) / w
}

/// First-order amplitudes of |g,n−1⟩, |g,n+1⟩, |g,n+2⟩ starting from |e,n⟩.
/// The |g,n−1⟩ channel is zero for n = 0.
pub fn first_order_amplitudes(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    t: f64,
) -> Result<PerturbationAmplitudes> {
    check_denominators(cfg)?;
    let (w, w0, l) = (cfg.omega, cfg.omega0, cfg.lambda);
    let nf = n as f64;
    let m = nf + 1.0;
    Ok(PerturbationAmplitudes {
        // (e^{−i(ω+ω₀)t} − 1)/(ω+ω₀)
        c_gn_minus1: -l * nf.sqrt() * phase_ratio(-(w + w0), t),
        c_gn_plus1: -l * m.sqrt() * (1.0 - m * c.phi) * phase_ratio(w - w0, t),
        c_gn_plus2: l * c.xi() * (m * (nf + 2.0)).sqrt() * phase_ratio(2.0 * w - w0, t),
        t,
        n,
    })
}

/// Magnitudes of the time averages, term by term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeAveragedMagnitudes {
    /// λ√n/(ω+ω₀)
    pub m_minus1: f64,
    /// λ(n+1)^{3/2}φ/|ω−ω₀|, the GUP term T₂ of the |g,n+1⟩ channel.
    pub m_plus1_t2: f64,
    /// λ|ξ|√((n+1)(n+2))/|2ω−ω₀|
    pub m_plus2: f64,
}

pub fn time_averaged_magnitudes(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
) -> Result<TimeAveragedMagnitudes> {
    check_denominators(cfg)?;
    let (w, w0, l) = (cfg.omega, cfg.omega0, cfg.lambda.abs());
    let nf = n as f64;
    let m = nf + 1.0;
    Ok(TimeAveragedMagnitudes {
        m_minus1: l * nf.sqrt() / (w + w0),
        m_plus1_t2: l * m.powf(1.5) * c.phi.abs() / (w - w0).abs(),
        m_plus2: l * c.xi_mag.abs() * (m * (nf + 2.0)).sqrt() / (2.0 * w - w0).abs(),
    })
}

fn quadratic_weight(p: &GupParams) -> Result<f64> {
    let q = 3.0 * p.delta * p.delta - 2.0 * p.epsilon;
    if q == 0.0 || q.abs() <= 1e-15 * (3.0 * p.delta * p.delta).max(2.0 * p.epsilon.abs()) {
        return Err(Error::DegenerateModel {
            delta: p.delta,
            epsilon: p.epsilon,
        });
    }
    Ok(q)
}

/// ζ_LQ with the signed detuning factor (ω−ω₀)/(2ω−ω₀).
pub fn zeta_lq_signed(n: usize, cfg: &InteractionConfig, p: &GupParams) -> Result<f64> {
    check_denominators(cfg)?;
    let q = quadratic_weight(p)?;
    let (w, w0) = (cfg.omega, cfg.omega0);
    let nf = n as f64;
    Ok(
        (2.0 * (nf + 2.0)).sqrt() / (nf + 1.0) * (p.delta / q) / (p.gamma * (HBAR * w).sqrt())
            * ((w - w0) / (2.0 * w - w0)),
    )
}

/// ζ_LQ with the detuning factor in absolute value.
pub fn zeta_lq(n: usize, cfg: &InteractionConfig, p: &GupParams) -> Result<f64> {
    let (w, w0) = (cfg.omega, cfg.omega0);
    let factor = (w - w0) / (2.0 * w - w0);
    Ok(zeta_lq_signed(n, cfg, p)? / factor * factor.abs())
}

/// ζ_RQ with the signed detuning factor (ω−ω₀)/(ω+ω₀).
pub fn zeta_rq_signed(n: usize, cfg: &InteractionConfig, p: &GupParams) -> Result<f64> {
    check_denominators(cfg)?;
    let q = quadratic_weight(p)?;
    let (w, w0) = (cfg.omega, cfg.omega0);
    let nf = n as f64;
    Ok(nf.sqrt() / (nf + 1.0).powf(1.5) * ((w - w0) / (w + w0))
        / q
        / (p.gamma * p.gamma)
        / (HBAR * w))
}

/// ζ_RQ with the detuning factor in absolute value.
pub fn zeta_rq(n: usize, cfg: &InteractionConfig, p: &GupParams) -> Result<f64> {
    let (w, w0) = (cfg.omega, cfg.omega0);
    let factor = (w - w0) / (w + w0);
    Ok(zeta_rq_signed(n, cfg, p)? / factor * factor.abs())
}

/// γ at which ζ_LQ = 1 (ζ_LQ ∝ 1/γ).
pub fn zeta_lq_unit_gamma(
    n: usize,
    cfg: &InteractionConfig,
    delta: f64,
    epsilon: f64,
) -> Result<f64> {
    zeta_lq(n, cfg, &GupParams::from_gamma(1.0, delta, epsilon)?)
}

/// Log-spaced (ω, Δ) sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaMapSpec {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub detuning_points: usize,
}

impl ZetaMapSpec {
    fn base(gamma: f64) -> Self {
        Self {
            n: 50,
            gamma,
            delta: 1.0,
            epsilon: 1.0,
            omega_min: 1e9,
            omega_max: 1e17,
            omega_points: 81,
            detuning_min: 1e3,
            detuning_max: 1e5,
            detuning_points: 21,
        }
    }

    /// n = 50, γ = 0.5, δ = ε = 1.
    pub fn fig2() -> Self {
        Self::base(0.5)
    }

    /// n = 50, γ = 5e3, δ = ε = 1.
    pub fn fig3() -> Self {
        Self::base(5e3)
    }

    pub fn params(&self) -> Result<GupParams> {
        GupParams::from_gamma(self.gamma, self.delta, self.epsilon)
    }
}

fn log_axis(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && points >= 1) {
        return Err(Error::InvalidInput(format!(
            "invalid log axis [{min}, {max}] with {points} points"
        )));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (a, b) = (min.log10(), max.log10());
    Ok((0..points)
        .map(|k| {
            if k == 0 {
                min
            } else if k + 1 == points {
                max
            } else {
                10f64.powf(a + (b - a) * k as f64 / (points - 1) as f64)
            }
        })
        .collect())
}

/// ζ_LQ and ζ_RQ on the grid; `zeta_lq[i][j]` belongs to detuning_axis[i], omega_axis[j].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaMap {
    pub omega_axis: Vec<f64>,
    pub detuning_axis: Vec<f64>,
    pub zeta_lq: Vec<Vec<f64>>,
    pub zeta_rq: Vec<Vec<f64>>,
    pub spec: ZetaMapSpec,
}

impl ZetaMap {
    /// Column of (ζ_LQ, ζ_RQ) at the ω node nearest to `omega` (log distance).
    pub fn slice_at_omega(&self, omega: f64) -> (f64, Vec<f64>, Vec<f64>) {
        let j = (0..self.omega_axis.len())
            .min_by(|&a, &b| {
                (self.omega_axis[a].ln() - omega.ln())
                    .abs()
                    .total_cmp(&(self.omega_axis[b].ln() - omega.ln()).abs())
            })
            .unwrap_or(0);
        (
            self.omega_axis[j],
            self.zeta_lq.iter().map(|r| r[j]).collect(),
            self.zeta_rq.iter().map(|r| r[j]).collect(),
        )
    }
}

pub fn zeta_map(spec: &ZetaMapSpec) -> Result<ZetaMap> {
    let p = spec.params()?;
    quadratic_weight(&p)?;
    let omega_axis = log_axis(spec.omega_min, spec.omega_max, spec.omega_points)?;
    let detuning_axis = log_axis(spec.detuning_min, spec.detuning_max, spec.detuning_points)?;
    let rows: Vec<(Vec<f64>, Vec<f64>)> = detuning_axis
        .par_iter()
        .map(|&d| {
            let mut lq = Vec::with_capacity(omega_axis.len());
            let mut rq = Vec::with_capacity(omega_axis.len());
            for &w in &omega_axis {
                let cfg = InteractionConfig::detuned(w, d, 1.0)?;
                lq.push(zeta_lq(spec.n, &cfg, &p)?);
                rq.push(zeta_rq(spec.n, &cfg, &p)?);
            }
            Ok((lq, rq))
        })
        .collect::<Result<_>>()?;
    let (zeta_lq, zeta_rq) = rows.into_iter().unzip();
    Ok(ZetaMap {
        omega_axis,
        detuning_axis,
        zeta_lq,
        zeta_rq,
        spec: *spec,
    })
}

/// Numeric vs first-order amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    /// max over the three channels of |C_num − C_pt|, divided by max |C_pt|.
    pub max_rel_err: f64,
    pub max_abs_err: f64,
    pub numeric: [C64; 3],
    pub analytic: [C64; 3],
    pub integration_error: f64,
}

/// Integration settings for [`perturbation_cross_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckOptions {
    pub step_fraction: f64,
    pub tolerance: f64,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        Self {
            step_fraction: 0.002,
            tolerance: 1e-13,
        }
    }
}

/// Evolve |e,n⟩ under ½ω₀σ₃ + ωÑ + H_I (full interaction including ξ) in the
/// interaction picture and compare with [`first_order_amplitudes`].
pub fn perturbation_cross_check(
    n: usize,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    t: f64,
    ncut: usize,
    opts: CrossCheckOptions,
) -> Result<CrossCheck> {
    check_denominators(cfg)?;
    if ncut < n + 3 {
        return Err(Error::Truncation(format!(
            "ncut = {ncut} must be at least n + 3 = {}",
            n + 3
        )));
    }
    let gap = (cfg.omega - cfg.omega0)
        .abs()
        .min((2.0 * cfg.omega - cfg.omega0).abs())
        .min(cfg.omega + cfg.omega0);
    let smallness = cfg.lambda.abs() * (n as f64).sqrt().max(1.0) / gap;
    if smallness > PERTURBATIVE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "coupling too strong for first-order theory: {smallness:.3e} > {PERTURBATIVE_LIMIT:e}"
        )));
    }
    let analytic_amps = first_order_amplitudes(n, cfg, c, t)?;
    let analytic = [
        analytic_amps.c_gn_minus1,
        analytic_amps.c_gn_plus1,
        analytic_amps.c_gn_plus2,
    ];
    let d = ncut + 1;
    let energies: Vec<f64> = (0..2 * d)
        .map(|i| {
            let (sign, k) = if i < d { (-1.0, i) } else { (1.0, i - d) };
            0.5 * sign * cfg.omega0 + cfg.omega * k as f64
        })
        .collect();
    let coupling: OperatorMatrix = build_full_interaction_hamiltonian(cfg, c, ncut)?;
    let c0: DVector<C64> = AtomFieldState::basis(Atom::Excited, n, ncut)?.to_vector();
    let (numeric, integration_error) = if cfg.lambda == 0.0 {
        ([ZERO; 3], 0.0)
    } else {
        let ip = InteractionPicture::new(energies, &coupling);
        let out = ip.evolve(&c0, t, opts.step_fraction, opts.tolerance)?;
        let pick = |k: Option<usize>| k.map_or(ZERO, |k| out.amplitudes[k]);
        (
            [pick(n.checked_sub(1)), pick(Some(n + 1)), pick(Some(n + 2))],
            out.error_estimate,
        )
    };
    let max_abs_err = numeric
        .iter()
        .zip(&analytic)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let scale = analytic.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let max_rel_err = if scale > 0.0 {
        max_abs_err / scale
    } else {
        max_abs_err
    };
    Ok(CrossCheck {
        max_rel_err,
        max_abs_err,
        numeric,
        analytic,
        integration_error,
    })
}
