//! Wigner functions of pure field states by displaced parity,
//!
//! ```text
//! W(z) = (2/π) Σ_k (−1)^k |⟨k|D(−z)|ψ⟩|²,   ∫W d²z = 1, z = x + iy.
//! ```
//!
//! With z = r·e^{iθ} and θ' = θ − π/2, D(−z) = R e^{−irX} R† where
//! X = ã + ã† and R = e^{iθ'Ñ}. X is diagonalized once on a padded space, so
//! each grid point costs two dense products. The outer R drops out of the
//! parity sum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, FockVector, C64, DEFAULT_TAIL_TOL};

/// Probability allowed in the two highest padded levels after displacement.
pub const LEAKAGE_LIMIT: f64 = 1e-8;

/// Rectangular grid in phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl Default for GridSpec {
    /// 201 × 201 points over [−4, 4]².
    fn default() -> Self {
        Self::square(4.0, 201)
    }
}

impl GridSpec {
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            nx: points,
            y_min: -half_width,
            y_max: half_width,
            ny: points,
        }
    }

    /// Same extent with 2(n−1)+1 points per axis, i.e. half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.nx >= 2
            && self.ny >= 2
            && self.x_max > self.x_min
            && self.y_max > self.y_min
            && [self.x_min, self.x_max, self.y_min, self.y_max]
                .iter()
                .all(|v| v.is_finite());
        if !ok {
            return Err(Error::InvalidInput(format!("invalid Wigner grid {self:?}")));
        }
        Ok(())
    }

    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| min + (max - min) * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn x_axis(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn y_axis(&self) -> Vec<f64> {
        Self::axis(self.y_min, self.y_max, self.ny)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// Largest |z| on the grid.
    pub fn max_radius(&self) -> f64 {
        let x = self.x_min.abs().max(self.x_max.abs());
        let y = self.y_min.abs().max(self.y_max.abs());
        x.hypot(y)
    }
}

/// W sampled on a grid; `values[j][i]` is W(re_axis[i] + i·im_axis[j]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub re_axis: Vec<f64>,
    pub im_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Riemann sum Σ W·dx·dy.
    pub fn integral(&self) -> f64 {
        let dx = self.re_axis[1] - self.re_axis[0];
        let dy = self.im_axis[1] - self.im_axis[0];
        self.values.iter().flatten().sum::<f64>() * dx * dy
    }

    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest |W| and its grid location (x, y).
    pub fn max_abs(&self) -> (f64, (f64, f64)) {
        let mut best = (0.0, (self.re_axis[0], self.im_axis[0]));
        for (j, row) in self.values.iter().enumerate() {
            for (i, &w) in row.iter().enumerate() {
                if w.abs() > best.0 {
                    best = (w.abs(), (self.re_axis[i], self.im_axis[j]));
                }
            }
        }
        best
    }

    /// Pointwise difference self − other on identical axes.
    pub fn difference(&self, other: &WignerGrid) -> WignerGrid {
        assert!(
            self.re_axis == other.re_axis && self.im_axis == other.im_axis,
            "grids differ"
        );
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        WignerGrid {
            re_axis: self.re_axis.clone(),
            im_axis: self.im_axis.clone(),
            values,
        }
    }

    /// Value at the grid node nearest to (x, y).
    pub fn nearest(&self, x: f64, y: f64) -> f64 {
        let nearest = |axis: &[f64], v: f64| {
            (0..axis.len())
                .min_by(|&a, &b| (axis[a] - v).abs().total_cmp(&(axis[b] - v).abs()))
                .unwrap_or(0)
        };
        self.values[nearest(&self.im_axis, y)][nearest(&self.re_axis, x)]
    }
}

/// Eigenbasis of X = ã + ã† on a padded Fock space, shared by all grid points.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    ncut: usize,
    dim: usize,
    x_values: Vec<f64>,
    /// Column j is the j-th eigenvector of X.
    x_vectors: DMatrix<f64>,
}

impl WignerEvaluator {
    /// Padding for states evaluated up to |z| = `max_radius`: 2r² + 10 levels.
    pub fn padding(max_radius: f64) -> usize {
        (2.0 * max_radius * max_radius + 10.0).ceil() as usize
    }

    pub fn new(ncut: usize, max_radius: f64) -> Result<Self> {
        if !(max_radius.is_finite() && max_radius >= 0.0) {
            return Err(Error::InvalidInput(format!("invalid radius {max_radius}")));
        }
        Self::with_dim(ncut, ncut + 1 + Self::padding(max_radius))
    }

    /// Explicit padded dimension (at least ncut + 3).
    pub fn with_dim(ncut: usize, dim: usize) -> Result<Self> {
        if dim < ncut + 3 {
            return Err(Error::InvalidInput(format!(
                "padded dimension {dim} too small for ncut = {ncut}"
            )));
        }
        let mut x = DMatrix::<f64>::zeros(dim, dim);
        for n in 1..dim {
            let s = (n as f64).sqrt();
            x[(n - 1, n)] = s;
            x[(n, n - 1)] = s;
        }
        let eig = SymmetricEigen::try_new(x, f64::EPSILON, 0).ok_or_else(|| {
            Error::LinearAlgebra("quadrature eigensolver did not converge".into())
        })?;
        Ok(Self {
            ncut,
            dim,
            x_values: eig.eigenvalues.iter().copied().collect(),
            x_vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// W(z) for a state on `ncut` levels.
    pub fn value(&self, psi: &DVector<C64>, z: C64) -> Result<f64> {
        Ok(self.row(psi, &[z])?[0])
    }

    /// W at each of `points`, batched into dense real products.
    pub fn row(&self, psi: &DVector<C64>, points: &[C64]) -> Result<Vec<f64>> {
        if psi.len() != self.ncut + 1 {
            return Err(Error::InvalidInput(format!(
                "state has {} levels, evaluator expects {}",
                psi.len(),
                self.ncut + 1
            )));
        }
        let m = points.len();
        let levels = self.ncut + 1;
        // Columns are R†ψ for each point, split into real and imaginary parts.
        let mut rot_re = DMatrix::<f64>::zeros(levels, m);
        let mut rot_im = DMatrix::<f64>::zeros(levels, m);
        for (col, z) in points.iter().enumerate() {
            let rot = z.arg() - FRAC_PI_2;
            for (k, &a) in psi.iter().enumerate() {
                let w = a * C64::from_polar(1.0, -rot * k as f64);
                rot_re[(k, col)] = w.re;
                rot_im[(k, col)] = w.im;
            }
        }
        // v = Qᵀ R†ψ, using only the rows of Q inside the state's support.
        let q_low = self.x_vectors.rows(0, levels);
        let v_re = q_low.tr_mul(&rot_re);
        let v_im = q_low.tr_mul(&rot_im);
        // Multiply by e^{−i r x_j}.
        let mut w_re = DMatrix::<f64>::zeros(self.dim, m);
        let mut w_im = DMatrix::<f64>::zeros(self.dim, m);
        for (col, z) in points.iter().enumerate() {
            let r = z.norm();
            for (j, &x) in self.x_values.iter().enumerate() {
                let (s, c) = (-r * x).sin_cos();
                let (a, b) = (v_re[(j, col)], v_im[(j, col)]);
                w_re[(j, col)] = a * c - b * s;
                w_im[(j, col)] = a * s + b * c;
            }
        }
        let u_re = &self.x_vectors * w_re;
        let u_im = &self.x_vectors * w_im;
        let mut out = Vec::with_capacity(m);
        for col in 0..m {
            let mut parity = 0.0;
            let mut edge = 0.0;
            for k in 0..self.dim {
                let p = u_re[(k, col)].powi(2) + u_im[(k, col)].powi(2);
                parity += if k % 2 == 0 { p } else { -p };
                if k + 2 >= self.dim {
                    edge += p;
                }
            }
            if edge > LEAKAGE_LIMIT {
                return Err(Error::Truncation(format!(
                    "displacement by |z| = {:.3} leaks {edge:.3e} into the top padded levels (dim = {})",
                    points[col].norm(),
                    self.dim
                )));
            }
            out.push(FRAC_2_PI * parity);
        }
        Ok(out)
    }

    /// Wigner grids of several states in one parallel pass over the rows.
    pub fn grids(&self, states: &[&DVector<C64>], spec: &GridSpec) -> Result<Vec<WignerGrid>> {
        spec.validate()?;
        let xs = spec.x_axis();
        let ys = spec.y_axis();
        let rows: Vec<Vec<Vec<f64>>> = ys
            .par_iter()
            .map(|&y| {
                let points: Vec<C64> = xs.iter().map(|&x| C64::new(x, y)).collect();
                states
                    .iter()
                    .map(|psi| self.row(psi, &points))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok((0..states.len())
            .map(|s| WignerGrid {
                re_axis: xs.clone(),
                im_axis: ys.clone(),
                values: rows.iter().map(|row| row[s].clone()).collect(),
            })
            .collect())
    }
}

/// W of a single state on a grid, padding chosen from the grid extent.
pub fn wigner_of_state(psi: &FockVector, spec: &GridSpec) -> Result<WignerGrid> {
    let eval = WignerEvaluator::new(psi.ncut(), spec.max_radius())?;
    Ok(eval.grids(&[psi.amps()], spec)?.remove(0))
}

/// ΔW = W_ψ − W_coh(reference) with summary values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerDifference {
    pub delta: WignerGrid,
    pub max_abs: f64,
    pub argmax: (f64, f64),
    /// W_coh at the location of max|ΔW|.
    pub reference_at_max: f64,
    /// Largest W_coh on the grid.
    pub reference_peak: f64,
}

pub fn wigner_difference(
    psi: &FockVector,
    reference_alpha: C64,
    spec: &GridSpec,
) -> Result<WignerDifference> {
    let reference = coherent_state(reference_alpha, psi.ncut(), DEFAULT_TAIL_TOL)?;
    let eval = WignerEvaluator::new(psi.ncut(), spec.max_radius())?;
    let mut grids = eval.grids(&[psi.amps(), reference.amps()], spec)?;
    let reference = grids.pop().expect("two grids");
    let state = grids.pop().expect("two grids");
    let delta = state.difference(&reference);
    let (max_abs, argmax) = delta.max_abs();
    let reference_peak = reference
        .values
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(WignerDifference {
        reference_at_max: reference.nearest(argmax.0, argmax.1),
        max_abs,
        argmax,
        reference_peak,
        delta,
    })
}

/// Relative precision needed to resolve ΔW against W.
///
/// # Panics
/// If `w_ref` is not positive.
pub fn wigner_precision_ratio(delta_w_max: f64, w_ref: f64) -> f64 {
    assert!(
        w_ref > 0.0,
        "reference Wigner value must be positive, got {w_ref}"
    );
    delta_w_max / w_ref
}

/// (2/π)e^{−2|z−α|²}
pub fn coherent_wigner(alpha: C64, z: C64) -> f64 {
    FRAC_2_PI * (-2.0 * (z - alpha).norm_sqr()).exp()
}

/// (2/π)(−1)ⁿ Lₙ(4|z|²) e^{−2|z|²}
pub fn fock_wigner(n: usize, z: C64) -> f64 {
    let r2 = z.norm_sqr();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    FRAC_2_PI * sign * crate::fock::laguerre(n, 4.0 * r2) * (-2.0 * r2).exp()
}
