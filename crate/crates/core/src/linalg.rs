//! Hermitian eigendecomposition and unitary evolution e^{−iHt}.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fock::{edge_weight, OperatorMatrix, C64, EDGE_WEIGHT_LIMIT};

/// H = V diag(λ) V† for a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(h: &OperatorMatrix) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::NonHermitian {
                residual: h.hermiticity_residual(),
            });
        }
        let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::LinearAlgebra("Hermitian eigensolver did not converge".into()))?;
        Ok(Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// e^{−iHt} v.
    pub fn evolve(&self, t: f64, v: &DVector<C64>) -> DVector<C64> {
        let mut coeffs = self.vectors.ad_mul(v);
        for (c, &e) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }

    /// The full propagator e^{−iHt}.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&e| C64::from_polar(1.0, -e * t)),
        );
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * phases[j]
        });
        scaled * self.vectors.adjoint()
    }
}

/// Reusable e^{−iHt} for one Hamiltonian (H/ħ in rad/s, t in s).
#[derive(Debug, Clone)]
pub struct Propagator {
    ncut: usize,
    eigen: HermitianEigen,
}

impl Propagator {
    pub fn new(h_over_hbar: &OperatorMatrix) -> Result<Self> {
        Ok(Self {
            ncut: h_over_hbar.ncut(),
            eigen: HermitianEigen::new(h_over_hbar)?,
        })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// Evolve `state` by time `t`, refusing states that already touch the cutoff.
    pub fn apply(&self, t: f64, state: &DVector<C64>) -> Result<DVector<C64>> {
        if state.len() != self.eigen.values.len() {
            return Err(Error::InvalidInput(format!(
                "state length {} does not match operator dimension {}",
                state.len(),
                self.eigen.values.len()
            )));
        }
        let edge = edge_weight(state, self.ncut);
        if edge > EDGE_WEIGHT_LIMIT {
            return Err(Error::Truncation(format!(
                "state carries {edge:.3e} probability in the top two Fock levels (limit {EDGE_WEIGHT_LIMIT:.0e})"
            )));
        }
        Ok(self.eigen.evolve(t, state))
    }
}

/// e^{−iHt/ħ}·state for a Hermitian H/ħ.
pub fn matrix_exponential_apply(
    h_over_hbar: &OperatorMatrix,
    t: f64,
    state: &DVector<C64>,
) -> Result<DVector<C64>> {
    Propagator::new(h_over_hbar)?.apply(t, state)
}
