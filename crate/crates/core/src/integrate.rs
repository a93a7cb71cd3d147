//! Fixed-step RK4 in the interaction picture.
//!
//! For H = H₀ + V with diagonal H₀ = diag(E), the interaction-picture
//! amplitudes obey
//!
//! ```text
//! dc_j/dt = −i Σ_k V_jk e^{i(E_j − E_k)t} c_k
//! ```
//!
//! Step size is tied to the fastest coupled frequency; accuracy is checked by
//! Richardson comparison of the N-step and 2N-step runs.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, C64, ZERO};

/// Default Richardson tolerance on the final amplitudes.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Step as a fraction of the fastest period scale 1/ω_max.
pub const DEFAULT_STEP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct InteractionPicture {
    energies: Vec<f64>,
    couplings: Vec<(usize, usize, C64)>,
}

#[derive(Debug, Clone)]
pub struct Integrated {
    pub amplitudes: DVector<C64>,
    pub error_estimate: f64,
    pub steps: usize,
}

impl InteractionPicture {
    /// `energies` are the diagonal of H₀/ħ; `coupling` is V/ħ.
    pub fn new(energies: Vec<f64>, coupling: &OperatorMatrix) -> Self {
        assert_eq!(
            energies.len(),
            coupling.dim(),
            "energy list does not match the operator"
        );
        let m = coupling.matrix();
        let mut couplings = Vec::new();
        for j in 0..m.nrows() {
            for k in 0..m.ncols() {
                if m[(j, k)] != ZERO {
                    couplings.push((j, k, m[(j, k)]));
                }
            }
        }
        Self {
            energies,
            couplings,
        }
    }

    /// Build directly from sparse couplings.
    pub fn from_couplings(energies: Vec<f64>, couplings: Vec<(usize, usize, C64)>) -> Self {
        Self {
            energies,
            couplings,
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Largest rate in the problem: coupled Bohr frequencies and coupling strengths.
    pub fn max_rate(&self) -> f64 {
        self.couplings
            .iter()
            .map(|&(j, k, v)| (self.energies[j] - self.energies[k]).abs().max(v.norm()))
            .fold(0.0, f64::max)
    }

    /// Interaction-picture Hamiltonian entries at time t, V_jk e^{i(E_j−E_k)t}.
    pub fn hamiltonian_at(&self, t: f64) -> Vec<(usize, usize, C64)> {
        self.couplings
            .iter()
            .map(|&(j, k, v)| {
                (
                    j,
                    k,
                    v * C64::from_polar(1.0, (self.energies[j] - self.energies[k]) * t),
                )
            })
            .collect()
    }

    fn derivative(
        &self,
        t: f64,
        c: &DVector<C64>,
        out: &mut DVector<C64>,
        scratch: &mut DVector<C64>,
    ) {
        for (k, (s, e)) in scratch.iter_mut().zip(&self.energies).enumerate() {
            *s = c[k] * C64::from_polar(1.0, -e * t);
        }
        out.fill(ZERO);
        for &(j, k, v) in &self.couplings {
            out[j] += v * scratch[k];
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o *= C64::new(0.0, -1.0) * C64::from_polar(1.0, self.energies[j] * t);
        }
    }

    /// Plain RK4 with a fixed number of steps.
    pub fn rk4(&self, c0: &DVector<C64>, t: f64, steps: usize) -> DVector<C64> {
        let n = self.dim();
        let h = t / steps as f64;
        let mut c = c0.clone();
        let (mut k1, mut k2, mut k3, mut k4) = (
            DVector::zeros(n),
            DVector::zeros(n),
            DVector::zeros(n),
            DVector::zeros(n),
        );
        let mut scratch = DVector::zeros(n);
        let mut tmp = DVector::zeros(n);
        let half = C64::from(0.5 * h);
        let full = C64::from(h);
        for step in 0..steps {
            let t0 = step as f64 * h;
            self.derivative(t0, &c, &mut k1, &mut scratch);
            tmp.copy_from(&c);
            tmp.axpy(half, &k1, ONE_C);
            self.derivative(t0 + 0.5 * h, &tmp, &mut k2, &mut scratch);
            tmp.copy_from(&c);
            tmp.axpy(half, &k2, ONE_C);
            self.derivative(t0 + 0.5 * h, &tmp, &mut k3, &mut scratch);
            tmp.copy_from(&c);
            tmp.axpy(full, &k3, ONE_C);
            self.derivative(t0 + h, &tmp, &mut k4, &mut scratch);
            for i in 0..n {
                c[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
        }
        c
    }

    /// RK4 from 0 to `t` with step ≤ `step_fraction`/max_rate, verified by step doubling.
    pub fn evolve(
        &self,
        c0: &DVector<C64>,
        t: f64,
        step_fraction: f64,
        tolerance: f64,
    ) -> Result<Integrated> {
        if c0.len() != self.dim() {
            return Err(Error::InvalidInput(
                "initial amplitudes do not match the dimension".into(),
            ));
        }
        if t == 0.0 || self.couplings.is_empty() {
            return Ok(Integrated {
                amplitudes: c0.clone(),
                error_estimate: 0.0,
                steps: 0,
            });
        }
        let rate = self.max_rate();
        let h = step_fraction / rate;
        let coarse_steps = ((t.abs() / h).ceil() as usize).max(1);
        let coarse = self.rk4(c0, t, coarse_steps);
        let fine = self.rk4(c0, t, 2 * coarse_steps);
        let error_estimate = (&fine - &coarse).norm() / 15.0;
        if error_estimate > tolerance {
            return Err(Error::Integration {
                estimate: error_estimate,
                tolerance,
            });
        }
        Ok(Integrated {
            amplitudes: fine,
            error_estimate,
            steps: 2 * coarse_steps,
        })
    }
}

const ONE_C: C64 = C64::new(1.0, 0.0);
