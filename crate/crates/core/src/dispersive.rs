//! Large-detuning regime: the effective Hamiltonian, checks of its derivation,
//! exact dispersive evolution of coherent states, and the first-order
//! photon-added-coherent-state decomposition.
//!
//! With μ = λ²/Δ the effective Hamiltonian is diagonal in the Fock basis:
//!
//! ```text
//! H_eff/ħ = μ[σ₃(Ñ − 2Ñ²φ) + σ₊σ₋(Ĩ − 2φ − 4Ñφ)]
//! |g,n⟩: −μ(n − 2n²φ)
//! |e,n⟩:  μ(n − 2n²φ + 1 − 2φ − 4nφ) = μ[(n+1) − 2(n+1)²φ]
//! ```

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    coherent_state, photon_added_coherent_state, photon_added_norm, Atom, AtomFieldState,
    FockVector, OperatorMatrix, C64, DEFAULT_TAIL_TOL, I, ZERO,
};
use crate::gup::{
    build_dispersive_lowering, build_rwa_hamiltonian_rotating, rotating_free_energies,
    GupCoefficients, InteractionConfig,
};
use crate::integrate::InteractionPicture;
use crate::linalg::HermitianEigen;

/// Minimum |Δ|/(λ√ncut) accepted as dispersive.
pub const DISPERSIVE_RATIO_MIN: f64 = 10.0;

/// Upper limit on 2φμt⟨n²⟩ for the first-order expansion.
pub const LINEARITY_LIMIT: f64 = 0.1;

/// Parameters of a dispersive evolution. `valid_linear` is derived on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveConfig {
    /// μ = λ²/Δ, rad/s.
    pub mu: f64,
    pub phi: f64,
    pub alpha: C64,
    pub t: f64,
    pub ncut: usize,
    /// 2φμt⟨n²⟩ < 0.1 with the exact coherent moment ⟨n²⟩ = |α|⁴ + |α|².
    pub valid_linear: bool,
}

impl DispersiveConfig {
    pub fn new(mu: f64, phi: f64, alpha: C64, t: f64, ncut: usize) -> Self {
        let mut d = Self {
            mu,
            phi,
            alpha,
            t,
            ncut,
            valid_linear: false,
        };
        d.valid_linear = d.linearity_parameter() < LINEARITY_LIMIT;
        d
    }

    /// |2φμt|·⟨n²⟩.
    pub fn linearity_parameter(&self) -> f64 {
        let a2 = self.alpha.norm_sqr();
        (2.0 * self.phi * self.mu * self.t).abs() * (a2 * a2 + a2)
    }

    /// 1/(φ|μ|), the time scale on which the n² phase becomes O(1).
    pub fn time_bound(&self) -> f64 {
        linear_time_bound(self.phi, self.mu)
    }
}

/// 1/(φ|μ|); infinite when either vanishes.
pub fn linear_time_bound(phi: f64, mu: f64) -> f64 {
    1.0 / (phi * mu).abs()
}

/// ⟨n²⟩ and ⟨n⁴⟩ of a coherent state with mean photon number x = |α|².
pub fn coherent_moments(alpha: C64) -> (f64, f64) {
    let x = alpha.norm_sqr();
    (x * x + x, x.powi(4) + 6.0 * x.powi(3) + 7.0 * x * x + x)
}

/// Eigenvalue of H_eff/ħ on |atom, n⟩.
pub fn effective_energy(atom: Atom, n: usize, mu: f64, phi: f64) -> f64 {
    let n = n as f64;
    match atom {
        Atom::Ground => -mu * (n - 2.0 * n * n * phi),
        Atom::Excited => mu * (n - 2.0 * n * n * phi + 1.0 - 2.0 * phi - 4.0 * n * phi),
    }
}

fn effective_matrix(mu: f64, phi: f64, ncut: usize) -> OperatorMatrix {
    let d = ncut + 1;
    let mut m = nalgebra::DMatrix::zeros(2 * d, 2 * d);
    for n in 0..=ncut {
        m[(n, n)] = C64::from(effective_energy(Atom::Ground, n, mu, phi));
        m[(d + n, d + n)] = C64::from(effective_energy(Atom::Excited, n, mu, phi));
    }
    OperatorMatrix::from_matrix(ncut, true, m)
}

/// |Δ|/(λ√ncut).
pub fn dispersive_ratio(cfg: &InteractionConfig, ncut: usize) -> f64 {
    cfg.detuning.abs() / (cfg.lambda.abs() * (ncut.max(1) as f64).sqrt())
}

fn require_dispersive(cfg: &InteractionConfig, ncut: usize) -> Result<()> {
    let ratio = dispersive_ratio(cfg, ncut);
    if ratio < DISPERSIVE_RATIO_MIN {
        return Err(Error::DispersiveRegime { ratio });
    }
    Ok(())
}

/// H_eff/ħ on atom⊗field, diagonal in the Fock basis.
pub fn build_effective_hamiltonian(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<OperatorMatrix> {
    if ncut < 1 {
        return Err(Error::InvalidInput("ncut must be >= 1".into()));
    }
    require_dispersive(cfg, ncut)?;
    Ok(effective_matrix(cfg.mu(), c.phi, ncut))
}

/// Residual and Hermiticity of (λ²/Δ)[Â, Â†] against H_eff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorCheck {
    /// max |(λ²/Δ)[Â,Â†] − H_eff| over Fock levels n ≤ ncut − 1.
    pub residual: f64,
    /// Hermiticity residual of (λ²/Δ)[Â,Â†].
    pub hermiticity: f64,
}

/// Build Â and Â† explicitly and compare μ[Â,Â†] with H_eff away from the cutoff.
///
/// The exact difference is μφ²·(n+1)³ on |e,n⟩ and μφ²·n³ on |g,n⟩, so the
/// interior maximum is μφ²·ncut³.
pub fn commutator_check(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<CommutatorCheck> {
    if ncut < 3 {
        return Err(Error::InvalidInput(format!(
            "ncut must be >= 3, got {ncut}"
        )));
    }
    let mu = cfg.mu();
    let a = build_dispersive_lowering(c.phi, ncut)?;
    let comm = a.commutator(&a.adjoint()).scaled(C64::from(mu));
    let heff = effective_matrix(mu, c.phi, ncut);
    let d = ncut + 1;
    let interior: Vec<usize> = (0..ncut).chain(d..d + ncut).collect();
    let mut residual: f64 = 0.0;
    for &i in &interior {
        for &j in &interior {
            residual = residual.max((comm.get(i, j) - heff.get(i, j)).norm());
        }
    }
    Ok(CommutatorCheck {
        residual,
        hermiticity: comm.hermiticity_residual(),
    })
}

/// How the interaction-picture reference state is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DysonMethod {
    /// Diagonalize the rotating-frame RWA Hamiltonian and transform the result
    /// into the interaction picture.
    Spectral,
    /// Fixed-step RK4 on the interaction-picture equations with Richardson check.
    Rk4 { step_fraction: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DysonCheck {
    /// |⟨ψ_eff|ψ_IP⟩|².
    pub fidelity: f64,
    /// λ|⟨Â†Â⟩|^{1/2}/|Δ| in the initial state.
    pub dropped_term_mag: f64,
}

/// Interaction-picture state under H_IP = λ(Â e^{it(Δ+8nχω)} + h.c.).
///
/// The n-dependent phase is exact: between |e,n⟩ and |g,n+1⟩ the frame
/// frequency is Δ + 8(n+1)χω.
pub fn evolve_interaction_picture(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
    psi0: &DVector<C64>,
    t: f64,
    method: DysonMethod,
) -> Result<DVector<C64>> {
    let free = rotating_free_energies(cfg, c, ncut);
    let h = build_rwa_hamiltonian_rotating(cfg, c, ncut)?;
    match method {
        DysonMethod::Spectral => {
            let psi = HermitianEigen::new(&h)?.evolve(t, psi0);
            Ok(DVector::from_iterator(
                psi.len(),
                psi.iter()
                    .zip(&free)
                    .map(|(&a, &e)| a * C64::from_polar(1.0, e * t)),
            ))
        }
        DysonMethod::Rk4 {
            step_fraction,
            tolerance,
        } => {
            let mut coupling = h.into_matrix();
            coupling.fill_diagonal(ZERO);
            let ip =
                InteractionPicture::new(free, &OperatorMatrix::from_matrix(ncut, true, coupling));
            Ok(ip.evolve(psi0, t, step_fraction, tolerance)?.amplitudes)
        }
    }
}

/// Compare interaction-picture evolution of |atom⟩|α⟩ with e^{−iH_eff t}.
pub fn dyson_consistency_check(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
    t: f64,
    alpha: C64,
    atom: Atom,
    method: DysonMethod,
) -> Result<DysonCheck> {
    require_dispersive(cfg, ncut)?;
    let field = coherent_state(alpha, ncut, DEFAULT_TAIL_TOL)?;
    let psi0 = AtomFieldState::product(atom, &field).to_vector();
    let a = build_dispersive_lowering(c.phi, ncut)?;
    let a_psi = a.apply(&psi0);
    let dropped_term_mag = cfg.lambda.abs() * a_psi.norm() / cfg.detuning.abs();
    if cfg.lambda == 0.0 {
        return Ok(DysonCheck {
            fidelity: 1.0,
            dropped_term_mag,
        });
    }
    let exact = evolve_interaction_picture(cfg, c, ncut, &psi0, t, method)?;
    let mu = cfg.mu();
    let d = ncut + 1;
    let eff = DVector::from_iterator(
        2 * d,
        psi0.iter().enumerate().map(|(i, &a)| {
            let (atom, n) = if i < d {
                (Atom::Ground, i)
            } else {
                (Atom::Excited, i - d)
            };
            a * C64::from_polar(1.0, -effective_energy(atom, n, mu, c.phi) * t)
        }),
    );
    Ok(DysonCheck {
        fidelity: eff.dotc(&exact).norm_sqr(),
        dropped_term_mag,
    })
}

/// Exact phase-by-phase evolution of |atom⟩|α⟩ under H_eff; unit norm.
pub fn evolve_dispersive_exact(d: &DispersiveConfig, atom: Atom) -> Result<AtomFieldState> {
    let field = coherent_state(d.alpha, d.ncut, DEFAULT_TAIL_TOL)?;
    let amps =
        DVector::from_iterator(
            d.ncut + 1,
            field.amps().iter().enumerate().map(|(n, &a)| {
                a * C64::from_polar(1.0, -effective_energy(atom, n, d.mu, d.phi) * d.t)
            }),
        );
    let field = FockVector::from_amps(amps)?;
    Ok(AtomFieldState::product(atom, &field))
}

/// First-order expansion of the dispersive state in photon-added coherent
/// states |β, m⟩ = ã†ᵐ|β⟩/k_{β,m}:
///
/// ```text
/// |ψ⟩ = base·|atom⟩|β⟩ + pacs1·|atom⟩|β,1⟩ + pacs2·|atom⟩|β,2⟩
/// ```
///
/// β = αe^{iμt} for the ground state and αe^{−iμt} for the excited state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonAddedDecomposition {
    pub atom: Atom,
    pub beta: C64,
    pub base_amp: C64,
    pub pacs1_amp: C64,
    pub pacs2_amp: C64,
    /// 𝒩, the norm of the assembled state before normalization.
    pub normalization: f64,
    pub k1: f64,
    pub k2: f64,
}

impl PhotonAddedDecomposition {
    /// Assemble the normalized field state on `ncut` levels.
    pub fn field_state(&self, ncut: usize) -> Result<FockVector> {
        let base = coherent_state(self.beta, ncut, DEFAULT_TAIL_TOL)?;
        let p1 = photon_added_coherent_state(self.beta, 1, ncut)?;
        let p2 = photon_added_coherent_state(self.beta, 2, ncut)?;
        let v =
            base.amps() * self.base_amp + p1.amps() * self.pacs1_amp + p2.amps() * self.pacs2_amp;
        FockVector::from_amps(v)
    }

    pub fn state(&self, ncut: usize) -> Result<AtomFieldState> {
        Ok(AtomFieldState::product(self.atom, &self.field_state(ncut)?))
    }
}

/// Decompose the dispersive state at O(φ); 𝒩 is the numeric norm of the
/// assembled state on `d.ncut` levels.
pub fn photon_added_decomposition(
    d: &DispersiveConfig,
    atom: Atom,
) -> Result<PhotonAddedDecomposition> {
    if !d.valid_linear {
        return Err(Error::Linearity {
            parameter: d.linearity_parameter(),
            time_bound: d.time_bound(),
        });
    }
    let k1 = photon_added_norm(d.alpha, 1);
    let k2 = photon_added_norm(d.alpha, 2);
    let alpha = d.alpha;
    let s = 2.0 * d.phi * d.mu * d.t;
    let rot = |k: f64| C64::from_polar(1.0, k * d.mu * d.t);
    let (beta, base, p1, p2) = match atom {
        Atom::Ground => (
            alpha * rot(1.0),
            C64::from(1.0),
            -I * s * alpha * rot(1.0) * k1,
            -I * s * alpha * alpha * rot(2.0) * k2,
        ),
        Atom::Excited => (
            alpha * rot(-1.0),
            rot(-1.0) * (1.0 + I * s),
            I * s * alpha * 3.0 * k1 * rot(-2.0),
            I * s * alpha * alpha * k2 * rot(-3.0),
        ),
    };
    let raw = PhotonAddedDecomposition {
        atom,
        beta,
        base_amp: base,
        pacs1_amp: p1,
        pacs2_amp: p2,
        normalization: 1.0,
        k1,
        k2,
    };
    let base_v = coherent_state(beta, d.ncut, DEFAULT_TAIL_TOL)?;
    let p1_v = photon_added_coherent_state(beta, 1, d.ncut)?;
    let p2_v = photon_added_coherent_state(beta, 2, d.ncut)?;
    let norm = (base_v.amps() * base + p1_v.amps() * p1 + p2_v.amps() * p2).norm();
    Ok(PhotonAddedDecomposition {
        base_amp: base / norm,
        pacs1_amp: p1 / norm,
        pacs2_amp: p2 / norm,
        normalization: norm,
        ..raw
    })
}

/// Time bounds 1/(φμ) quoted for a given μ and ω at Planck-scale (γ₀ = 1)
/// and electroweak-scale (γ₀ = 1e8) GUP with δ = ε = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeBounds {
    pub planck: f64,
    pub electroweak: f64,
}

pub fn scale_time_bounds(mu: f64, omega: f64) -> Result<TimeBounds> {
    use crate::gup::{derive_coefficients, GupParams};
    let bound = |gamma0: f64| -> Result<f64> {
        let c = derive_coefficients(&GupParams::from_gamma0(gamma0, 1.0, 1.0)?, omega)?;
        Ok(linear_time_bound(c.phi, mu))
    };
    Ok(TimeBounds {
        planck: bound(1.0)?,
        electroweak: bound(crate::constants::GAMMA0_ELECTROWEAK_BOUND)?,
    })
}
