//! GUP parameters, derived coefficients and the modified Hamiltonians.
//!
//! The commutator [q, p] = iħ(1 − 2δγp + 4εγ²p²) with γ = γ₀/(√M_Pl·c)
//! feeds the dimensionless coefficients
//!
//! ```text
//! φ = ħωγ²(3δ² − 2ε)   χ = (ħωγ²/2)(δ² − ε)   β = (ħωγ²/2)(δ² − 2ε)   |ξ| = δγ√(2ħω)
//! ```
//!
//! Every builder returns H/ħ in rad/s on the `[ground | excited]` atom⊗field
//! layout. Cubic ã³/ã†³ terms are never included.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::constants::{gamma_conversion, GAMMA0_ELECTROWEAK_BOUND, HBAR, PLANCK_LENGTH};
use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, C64, I, ZERO};

/// Physical GUP inputs. `gamma` is in J^{-1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GupParams {
    pub gamma0: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl GupParams {
    pub fn from_gamma0(gamma0: f64, delta: f64, epsilon: f64) -> Result<Self> {
        Self::validate(gamma0, delta, epsilon)?;
        Ok(Self {
            gamma0,
            delta,
            epsilon,
            gamma: gamma0 / gamma_conversion(),
        })
    }

    /// From γ in SI units; γ₀ is back-computed.
    pub fn from_gamma(gamma: f64, delta: f64, epsilon: f64) -> Result<Self> {
        let gamma0 = gamma * gamma_conversion();
        Self::validate(gamma0, delta, epsilon)?;
        Ok(Self {
            gamma0,
            delta,
            epsilon,
            gamma,
        })
    }

    fn validate(gamma0: f64, delta: f64, epsilon: f64) -> Result<()> {
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma0 must be finite and >= 0, got {gamma0}"
            )));
        }
        if !(delta.is_finite() && epsilon.is_finite()) {
            return Err(Error::InvalidInput(
                "delta and epsilon must be finite".into(),
            ));
        }
        Ok(())
    }

    /// 3δ² − 2ε, the weight of the quadratic correction φ.
    pub fn quadratic_weight(&self) -> f64 {
        3.0 * self.delta * self.delta - 2.0 * self.epsilon
    }
}

/// Dimensionless coefficients φ, χ, β and |ξ| at field frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GupCoefficients {
    pub phi: f64,
    pub chi: f64,
    pub beta: f64,
    pub xi_mag: f64,
    pub omega: f64,
}

impl GupCoefficients {
    /// All corrections switched off.
    pub fn zero(omega: f64) -> Self {
        Self {
            phi: 0.0,
            chi: 0.0,
            beta: 0.0,
            xi_mag: 0.0,
            omega,
        }
    }

    /// Hand-picked φ, χ, |ξ| with β fixed by 8χ = φ + 2β.
    pub fn synthetic(phi: f64, chi: f64, xi_mag: f64, omega: f64) -> Self {
        Self {
            phi,
            chi,
            beta: (8.0 * chi - phi) / 2.0,
            xi_mag,
            omega,
        }
    }

    /// ξ = i·δγ√(2ħω).
    pub fn xi(&self) -> C64 {
        I * self.xi_mag
    }
}

pub fn derive_coefficients(p: &GupParams, omega: f64) -> Result<GupCoefficients> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let hw_g2 = HBAR * omega * p.gamma * p.gamma;
    let d2 = p.delta * p.delta;
    Ok(GupCoefficients {
        phi: hw_g2 * (3.0 * d2 - 2.0 * p.epsilon),
        chi: 0.5 * hw_g2 * (d2 - p.epsilon),
        beta: 0.5 * hw_g2 * (d2 - 2.0 * p.epsilon),
        xi_mag: p.delta * p.gamma * (2.0 * HBAR * omega).sqrt(),
        omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthScaleBounds {
    /// γ₀²·l_Pl in metres.
    pub length_scale: f64,
    /// γ₀ ≤ 1e8 (electroweak bound).
    pub gamma_upper_ok: bool,
}

pub fn length_scale_bounds(p: &GupParams) -> LengthScaleBounds {
    LengthScaleBounds {
        length_scale: p.gamma0 * p.gamma0 * PLANCK_LENGTH,
        gamma_upper_ok: p.gamma0 <= GAMMA0_ELECTROWEAK_BOUND,
    }
}

/// Frequencies in rad/s. Δ = ω₀ − ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionConfig {
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
    pub detuning: f64,
}

impl InteractionConfig {
    pub fn new(omega: f64, omega0: f64, lambda: f64) -> Result<Self> {
        if !(omega > 0.0 && omega0 > 0.0) || !omega.is_finite() || !omega0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "omega and omega0 must be positive, got {omega} and {omega0}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidInput("lambda must be finite".into()));
        }
        Ok(Self {
            omega,
            omega0,
            lambda,
            detuning: omega0 - omega,
        })
    }

    pub fn resonant(omega: f64, lambda: f64) -> Result<Self> {
        Self::new(omega, omega, lambda)
    }

    pub fn detuned(omega: f64, detuning: f64, lambda: f64) -> Result<Self> {
        Self::new(omega, omega + detuning, lambda)
    }

    /// μ = λ²/Δ.
    pub fn mu(&self) -> f64 {
        self.lambda * self.lambda / self.detuning
    }
}

fn require_ncut(ncut: usize, min: usize) -> Result<()> {
    if ncut < min {
        return Err(Error::InvalidInput(format!(
            "ncut must be >= {min}, got {ncut}"
        )));
    }
    Ok(())
}

/// Field level n in units of ω: n − 4(n²+n)χ − β (zero-point dropped).
pub fn field_level(n: usize, c: &GupCoefficients) -> f64 {
    let n = n as f64;
    n - 4.0 * (n * n + n) * c.chi - c.beta
}

/// ⟨e,n|σ₊ã(1 − Ñφ)|g,n+1⟩ = √(n+1)(1 − (n+1)φ).
pub fn rwa_coupling(n: usize, phi: f64) -> f64 {
    let m = (n + 1) as f64;
    m.sqrt() * (1.0 - m * phi)
}

fn atom_field_dim(ncut: usize) -> (usize, usize) {
    let d = ncut + 1;
    (d, 2 * d)
}

fn ground(n: usize) -> usize {
    n
}

fn excited(n: usize, d: usize) -> usize {
    d + n
}

/// Full interaction (pre-RWA), H_I/ħ:
///
/// λ[σ₊{ã† + ã − φãÑ + ξã²} + σ₋{ã + ã† − φã†(Ñ+1) − ξã†²}], ξ = i|ξ|.
pub fn build_full_interaction_hamiltonian(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<OperatorMatrix> {
    require_ncut(ncut, 3)?;
    let (d, dim) = atom_field_dim(ncut);
    let lambda = C64::from(cfg.lambda);
    let xi = c.xi();
    // σ₊ field block F₊; the σ₋ block is its adjoint.
    let mut fp = DMatrix::<C64>::zeros(d, d);
    for n in 0..=ncut {
        let nf = n as f64;
        if n < ncut {
            // ã†|n⟩
            fp[(n + 1, n)] += C64::from((nf + 1.0).sqrt());
        }
        if n >= 1 {
            // (ã − φãÑ)|n⟩ = √n(1 − nφ)|n−1⟩
            fp[(n - 1, n)] += C64::from(nf.sqrt() * (1.0 - nf * c.phi));
        }
        if n >= 2 {
            fp[(n - 2, n)] += xi * (nf * (nf - 1.0)).sqrt();
        }
    }
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..d {
        for j in 0..d {
            let v = fp[(i, j)];
            if v != ZERO {
                m[(excited(i, d), ground(j))] = lambda * v;
                m[(ground(j), excited(i, d))] = lambda * v.conj();
            }
        }
    }
    Ok(OperatorMatrix::from_matrix(ncut, true, m))
}

/// Full pre-RWA Hamiltonian: ½ω₀σ₃ + ω[Ñ − 4(Ñ²+Ñ)χ − β] + H_I.
pub fn build_full_hamiltonian(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<OperatorMatrix> {
    let mut m = build_full_interaction_hamiltonian(cfg, c, ncut)?.into_matrix();
    add_lab_diagonal(&mut m, cfg, c, ncut);
    Ok(OperatorMatrix::from_matrix(ncut, true, m))
}

fn add_lab_diagonal(
    m: &mut DMatrix<C64>,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) {
    let d = ncut + 1;
    for n in 0..=ncut {
        let field = cfg.omega * field_level(n, c);
        m[(ground(n), ground(n))] += C64::from(field - 0.5 * cfg.omega0);
        m[(excited(n, d), excited(n, d))] += C64::from(field + 0.5 * cfg.omega0);
    }
}

fn rwa_coupling_block(
    m: &mut DMatrix<C64>,
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) {
    let d = ncut + 1;
    for n in 0..ncut {
        let g = C64::from(cfg.lambda * rwa_coupling(n, c.phi));
        m[(excited(n, d), ground(n + 1))] = g;
        m[(ground(n + 1), excited(n, d))] = g;
    }
}

/// Post-RWA Hamiltonian in the lab frame:
///
/// ½ω₀σ₃ + ω[Ñ − {4(Ñ²+Ñ)χ + β}] + λ{σ₊(ã − ãÑφ) + σ₋(ã† − ã†(Ñ+1)φ)}.
pub fn build_rwa_hamiltonian(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<OperatorMatrix> {
    require_ncut(ncut, 2)?;
    let (_, dim) = atom_field_dim(ncut);
    let mut m = DMatrix::zeros(dim, dim);
    add_lab_diagonal(&mut m, cfg, c, ncut);
    rwa_coupling_block(&mut m, cfg, c, ncut);
    Ok(OperatorMatrix::from_matrix(ncut, true, m))
}

/// Post-RWA Hamiltonian in the frame rotating at ω per excitation, with the
/// constant −ω/2 − ωβ removed. Diagonal: ±Δ/2 − 4ωχ(n²+n).
///
/// The excitation number commutes with the RWA Hamiltonian, so this frame
/// only changes the global phase of each excitation manifold, and it keeps
/// optical-scale ω out of the eigensolver.
pub fn build_rwa_hamiltonian_rotating(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Result<OperatorMatrix> {
    require_ncut(ncut, 2)?;
    let (d, dim) = atom_field_dim(ncut);
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..=ncut {
        let nf = n as f64;
        let shift = -4.0 * cfg.omega * c.chi * (nf * nf + nf);
        m[(ground(n), ground(n))] = C64::from(shift - 0.5 * cfg.detuning);
        m[(excited(n, d), excited(n, d))] = C64::from(shift + 0.5 * cfg.detuning);
    }
    rwa_coupling_block(&mut m, cfg, c, ncut);
    Ok(OperatorMatrix::from_matrix(ncut, true, m))
}

/// Diagonal of the rotating-frame free Hamiltonian (same frame as
/// [`build_rwa_hamiltonian_rotating`]), in the atom⊗field layout.
pub fn rotating_free_energies(
    cfg: &InteractionConfig,
    c: &GupCoefficients,
    ncut: usize,
) -> Vec<f64> {
    let d = ncut + 1;
    let mut e = vec![0.0; 2 * d];
    for n in 0..=ncut {
        let nf = n as f64;
        let shift = -4.0 * cfg.omega * c.chi * (nf * nf + nf);
        e[ground(n)] = shift - 0.5 * cfg.detuning;
        e[excited(n, d)] = shift + 0.5 * cfg.detuning;
    }
    e
}

/// Modified free field ω[(Ñ + ½) − 4(Ñ²+Ñ)χ − β], field space only.
pub fn build_modified_free_field(
    c: &GupCoefficients,
    omega: f64,
    ncut: usize,
) -> Result<OperatorMatrix> {
    require_ncut(ncut, 1)?;
    let mut m = DMatrix::zeros(ncut + 1, ncut + 1);
    for n in 0..=ncut {
        m[(n, n)] = C64::from(omega * (field_level(n, c) + 0.5));
    }
    Ok(OperatorMatrix::from_matrix(ncut, false, m))
}

/// Â = σ₊ã(Î − Ñφ) on atom⊗field.
pub fn build_dispersive_lowering(phi: f64, ncut: usize) -> Result<OperatorMatrix> {
    require_ncut(ncut, 1)?;
    let (d, dim) = atom_field_dim(ncut);
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..=ncut {
        let nf = n as f64;
        m[(excited(n - 1, d), ground(n))] = C64::from(nf.sqrt() * (1.0 - nf * phi));
    }
    Ok(OperatorMatrix::from_matrix(ncut, true, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        atom_field, build_annihilation, build_number, identity, sigma_minus, sigma_plus, sigma_z,
    };
    use approx::assert_relative_eq;

    fn params(gamma: f64, delta: f64, epsilon: f64) -> GupParams {
        GupParams::from_gamma(gamma, delta, epsilon).unwrap()
    }

    #[test]
    fn gamma_conversion_matches_quoted_value() {
        let p = GupParams::from_gamma0(1.0, 1.0, 1.0).unwrap();
        let quoted = 1.0 / crate::constants::QUOTED_GAMMA_CONVERSION;
        assert!((p.gamma - quoted).abs() / quoted < 1e-2);
        assert!(GupParams::from_gamma0(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn coefficients_vanish_without_gup() {
        let c = derive_coefficients(&params(0.0, 1.0, 1.0), 1e15).unwrap();
        assert_eq!((c.phi, c.chi, c.beta, c.xi_mag), (0.0, 0.0, 0.0, 0.0));
        assert!(derive_coefficients(&params(1.0, 1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn quadratic_only_model() {
        let gamma = 2.0e3;
        let omega = 3.0e14;
        let c = derive_coefficients(&params(gamma, 0.0, 0.25), omega).unwrap();
        let unit = HBAR * omega * gamma * gamma;
        assert_relative_eq!(c.phi, -unit / 2.0, max_relative = 1e-14);
        assert_relative_eq!(c.chi, -unit / 8.0, max_relative = 1e-14);
        assert_relative_eq!(c.beta, -unit / 4.0, max_relative = 1e-14);
        assert_relative_eq!(8.0 * c.chi, c.phi + 2.0 * c.beta, max_relative = 1e-14);
        assert_relative_eq!(c.phi + 2.0 * c.beta, -unit, max_relative = 1e-14);
        assert_eq!(c.xi_mag, 0.0);
    }

    #[test]
    fn electroweak_phi_at_1e15() {
        let c = derive_coefficients(&params(1e3, 1.0, 1.0), 1e15).unwrap();
        // ħ·1e15·1e6
        assert_relative_eq!(c.phi, 1.054_571_817e-13, max_relative = 1e-12);
    }

    #[test]
    fn length_scales() {
        let b = length_scale_bounds(&GupParams::from_gamma0(1.0, 1.0, 1.0).unwrap());
        assert_relative_eq!(b.length_scale, PLANCK_LENGTH);
        assert!(b.gamma_upper_ok);
        let b = length_scale_bounds(&GupParams::from_gamma0(1e8, 1.0, 1.0).unwrap());
        assert_relative_eq!(b.length_scale, 1.616_255e-19, max_relative = 1e-12);
        assert!(b.gamma_upper_ok);
        let b = length_scale_bounds(&GupParams::from_gamma0(1e9, 1.0, 1.0).unwrap());
        assert!(!b.gamma_upper_ok);
    }

    #[test]
    fn full_interaction_reduces_to_dipole_term() {
        let ncut = 6;
        let cfg = InteractionConfig::new(2.0, 2.5, 0.3).unwrap();
        let h =
            build_full_interaction_hamiltonian(&cfg, &GupCoefficients::zero(2.0), ncut).unwrap();
        let a = build_annihilation(ncut).unwrap();
        let x = a.sum(&a.adjoint());
        let sx = sigma_plus() + sigma_minus();
        let expect = atom_field(&sx, &x).scaled(C64::from(0.3));
        assert!((h.matrix() - expect.matrix()).norm() < 1e-15);
    }

    #[test]
    fn full_interaction_brute_force() {
        let ncut = 7;
        let cfg = InteractionConfig::new(1.0, 1.3, 0.2).unwrap();
        let c = GupCoefficients::synthetic(0.03, 0.01, 0.05, 1.0);
        let h = build_full_interaction_hamiltonian(&cfg, &c, ncut).unwrap();
        assert!(h.is_hermitian());

        let a = build_annihilation(ncut).unwrap();
        let ad = a.adjoint();
        let n = build_number(ncut).unwrap();
        let id = identity(ncut);
        let xi = c.xi();
        let phi = C64::from(c.phi);
        let fp = ad
            .sum(&a)
            .sum(&a.product(&n).scaled(-phi))
            .sum(&a.product(&a).scaled(xi));
        let fm = a
            .sum(&ad)
            .sum(&ad.product(&n.sum(&id)).scaled(-phi))
            .sum(&ad.product(&ad).scaled(-xi));
        let expect = atom_field(&sigma_plus(), &fp)
            .sum(&atom_field(&sigma_minus(), &fm))
            .scaled(C64::from(cfg.lambda));
        assert!((h.matrix() - expect.matrix()).norm() < 1e-14);

        // ⟨g, n+2|H_I|e, n⟩ = −λξ√((n+1)(n+2))
        let d = ncut + 1;
        for k in 0..ncut - 1 {
            let kf = k as f64;
            let expected = -xi * cfg.lambda * ((kf + 1.0) * (kf + 2.0)).sqrt();
            assert!((h.get(k + 2, d + k) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn rwa_hamiltonian_elements() {
        let ncut = 6;
        let cfg = InteractionConfig::new(3.0, 3.2, 0.4).unwrap();
        let c = GupCoefficients::synthetic(0.02, 0.004, 0.0, 3.0);
        let h = build_rwa_hamiltonian(&cfg, &c, ncut).unwrap();
        assert!(h.is_hermitian());
        let d = ncut + 1;
        for n in 0..ncut {
            let nf = n as f64;
            let expect = 0.4 * ((nf + 1.0).sqrt() - (nf + 1.0).powf(1.5) * 0.02);
            assert_relative_eq!(h.get(n + 1, d + n).re, expect, max_relative = 1e-14);
            let field = 3.0 * (nf - 4.0 * (nf * nf + nf) * c.chi - c.beta);
            assert_relative_eq!(h.get(d + n, d + n).re, field + 1.6, max_relative = 1e-14);
            assert_relative_eq!(h.get(n, n).re, field - 1.6, max_relative = 1e-14);
        }
    }

    #[test]
    fn rwa_dressed_splitting_without_gup() {
        let ncut = 5;
        let cfg = InteractionConfig::resonant(1.0, 0.25).unwrap();
        let h = build_rwa_hamiltonian(&cfg, &GupCoefficients::zero(1.0), ncut).unwrap();
        let d = ncut + 1;
        for n in 0..ncut {
            // 2×2 block {|e,n⟩, |g,n+1⟩}
            let a = h.get(d + n, d + n).re;
            let b = h.get(n + 1, n + 1).re;
            let g = h.get(d + n, n + 1).re;
            let center = 0.5 * (a + b);
            let half = (0.25 * (a - b).powi(2) + g * g).sqrt();
            assert_relative_eq!(half, 0.25 * ((n + 1) as f64).sqrt(), max_relative = 1e-14);
            assert_relative_eq!(center, n as f64 + 0.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn rwa_is_full_hamiltonian_without_fast_terms() {
        let ncut = 8;
        let cfg = InteractionConfig::new(1.5, 1.7, 0.3).unwrap();
        let c = GupCoefficients::synthetic(0.01, 0.002, 0.04, 1.5);
        let full = build_full_hamiltonian(&cfg, &c, ncut).unwrap();
        let rwa = build_rwa_hamiltonian(&cfg, &c, ncut).unwrap();
        let d = ncut + 1;
        let mut stripped = full.matrix().clone();
        for n in 0..=ncut {
            for k in 0..=ncut {
                // Keep only |e,n⟩ ↔ |g,n+1⟩ off the diagonal.
                if k != n + 1 {
                    stripped[(d + n, k)] = ZERO;
                    stripped[(k, d + n)] = ZERO;
                }
            }
        }
        assert!((stripped - rwa.matrix()).norm() < 1e-14);
    }

    #[test]
    fn rotating_frame_differs_by_excitation_number() {
        let ncut = 5;
        let cfg = InteractionConfig::new(2.0, 2.3, 0.2).unwrap();
        let c = GupCoefficients::synthetic(0.01, 0.003, 0.0, 2.0);
        let lab = build_rwa_hamiltonian(&cfg, &c, ncut).unwrap();
        let rot = build_rwa_hamiltonian_rotating(&cfg, &c, ncut).unwrap();
        let n = build_number(ncut).unwrap();
        let exc = atom_field(&crate::fock::atom_identity(), &n).sum(&atom_field(
            &(sigma_plus() * sigma_minus()),
            &identity(ncut),
        ));
        let constant = -0.5 * cfg.omega - cfg.omega * c.beta;
        let mut expect = rot.matrix() + exc.matrix() * C64::from(cfg.omega);
        for i in 0..expect.nrows() {
            expect[(i, i)] += C64::from(constant);
        }
        assert!((expect - lab.matrix()).norm() < 1e-13);
        let energies = rotating_free_energies(&cfg, &c, ncut);
        for (i, e) in energies.iter().enumerate() {
            assert_eq!(*e, rot.get(i, i).re);
        }
    }

    #[test]
    fn free_field_spectrum() {
        let omega = 2.0;
        let ncut = 4;
        let zero = build_modified_free_field(&GupCoefficients::zero(omega), omega, ncut).unwrap();
        for n in 0..=ncut {
            assert_eq!(zero.get(n, n).re, omega * (n as f64 + 0.5));
        }
        let c = GupCoefficients::synthetic(0.02, 0.004, 0.0, omega);
        let h = build_modified_free_field(&c, omega, ncut).unwrap();
        assert_relative_eq!(h.get(0, 0).re, omega * (0.5 - c.beta), max_relative = 1e-15);
        let gap = h.get(1, 1).re - h.get(0, 0).re;
        assert_relative_eq!(gap, omega * (1.0 - 8.0 * c.chi), max_relative = 1e-14);
        assert_relative_eq!(
            gap,
            omega * (1.0 - c.phi - 2.0 * c.beta),
            max_relative = 1e-14
        );
    }

    #[test]
    fn sigma_z_diagonal_matches_builder() {
        let ncut = 3;
        let cfg = InteractionConfig::new(1.0, 4.0, 0.0).unwrap();
        let h = build_rwa_hamiltonian(&cfg, &GupCoefficients::zero(1.0), ncut).unwrap();
        let expect = atom_field(&sigma_z(), &identity(ncut))
            .scaled(C64::from(2.0))
            .sum(&atom_field(
                &crate::fock::atom_identity(),
                &build_number(ncut).unwrap(),
            ));
        assert!((h.matrix() - expect.matrix()).norm() < 1e-15);
    }

    #[test]
    fn small_cutoffs_rejected() {
        let cfg = InteractionConfig::resonant(1.0, 1.0).unwrap();
        let c = GupCoefficients::zero(1.0);
        assert!(build_full_interaction_hamiltonian(&cfg, &c, 2).is_err());
        assert!(build_rwa_hamiltonian(&cfg, &c, 1).is_err());
        assert!(InteractionConfig::new(-1.0, 1.0, 1.0).is_err());
    }
}
