//! Truncated Fock-space states and operators.
//!
//! The GUP-deformed number states |ñ⟩ are stored as ordinary number-basis
//! vectors: the deformed ladder operators act on them exactly as â, â† act
//! on |n⟩, so every GUP correction lives in Hamiltonian coefficients.
//!
//! Atom⊗field vectors use the layout `[ground block | excited block]`, each
//! block holding photon numbers `0..=ncut`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tail-weight tolerance for coherent-state construction.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Probability allowed in the two highest Fock levels before evolution is refused.
pub const EDGE_WEIGHT_LIMIT: f64 = 1e-6;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Two-level atom basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    Ground,
    Excited,
}

/// Field state over photon numbers `0..=ncut`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    ncut: usize,
    amps: DVector<C64>,
    tail_weight: f64,
}

impl FockVector {
    pub fn from_amps(amps: DVector<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidInput("a Fock vector needs ncut >= 1".into()));
        }
        Ok(Self {
            ncut: amps.len() - 1,
            amps,
            tail_weight: 0.0,
        })
    }

    /// Number state |n⟩.
    pub fn number(n: usize, ncut: usize) -> Result<Self> {
        check_ncut(ncut)?;
        if n > ncut {
            return Err(Error::Truncation(format!(
                "|{n}> does not fit below ncut = {ncut}"
            )));
        }
        let mut amps = DVector::zeros(ncut + 1);
        amps[n] = ONE;
        Ok(Self {
            ncut,
            amps,
            tail_weight: 0.0,
        })
    }

    pub fn ncut(&self) -> usize {
        self.ncut
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amps(self) -> DVector<C64> {
        self.amps
    }

    /// Weight of the exact (untruncated) state that lies above `ncut`.
    pub fn tail_weight(&self) -> f64 {
        self.tail_weight
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩; both vectors must share the cutoff.
    pub fn inner(&self, other: &FockVector) -> C64 {
        assert_eq!(self.ncut, other.ncut, "Fock cutoffs differ");
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum::<f64>()
            / self.amps.norm_squared()
    }

    /// Copy into a larger (or equal) cutoff, zero padded.
    pub fn padded(&self, ncut: usize) -> FockVector {
        assert!(ncut >= self.ncut);
        let mut amps = DVector::zeros(ncut + 1);
        amps.rows_mut(0, self.ncut + 1).copy_from(&self.amps);
        FockVector {
            ncut,
            amps,
            tail_weight: self.tail_weight,
        }
    }

    pub fn normalized(mut self) -> FockVector {
        let norm = self.amps.norm();
        self.amps /= C64::from(norm);
        self
    }
}

/// Joint atom-field state with amplitudes C_{g,n} and C_{e,n}.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFieldState {
    ncut: usize,
    pub amps_g: DVector<C64>,
    pub amps_e: DVector<C64>,
}

impl AtomFieldState {
    pub fn new(amps_g: DVector<C64>, amps_e: DVector<C64>) -> Result<Self> {
        if amps_g.len() != amps_e.len() || amps_g.len() < 2 {
            return Err(Error::InvalidInput(
                "atom blocks must share a cutoff >= 1".into(),
            ));
        }
        Ok(Self {
            ncut: amps_g.len() - 1,
            amps_g,
            amps_e,
        })
    }

    /// |atom⟩ ⊗ |field⟩.
    pub fn product(atom: Atom, field: &FockVector) -> Self {
        let zeros = DVector::zeros(field.ncut + 1);
        let (amps_g, amps_e) = match atom {
            Atom::Ground => (field.amps.clone(), zeros),
            Atom::Excited => (zeros, field.amps.clone()),
        };
        Self {
            ncut: field.ncut,
            amps_g,
            amps_e,
        }
    }

    /// |atom, n⟩.
    pub fn basis(atom: Atom, n: usize, ncut: usize) -> Result<Self> {
        Ok(Self::product(atom, &FockVector::number(n, ncut)?))
    }

    pub fn from_vector(ncut: usize, v: &DVector<C64>) -> Self {
        let d = ncut + 1;
        assert_eq!(
            v.len(),
            2 * d,
            "vector does not match the atom-field dimension"
        );
        Self {
            ncut,
            amps_g: v.rows(0, d).into_owned(),
            amps_e: v.rows(d, d).into_owned(),
        }
    }

    pub fn to_vector(&self) -> DVector<C64> {
        let d = self.ncut + 1;
        let mut v = DVector::zeros(2 * d);
        v.rows_mut(0, d).copy_from(&self.amps_g);
        v.rows_mut(d, d).copy_from(&self.amps_e);
        v
    }

    pub fn ncut(&self) -> usize {
        self.ncut
    }

    pub fn amp(&self, atom: Atom, n: usize) -> C64 {
        match atom {
            Atom::Ground => self.amps_g[n],
            Atom::Excited => self.amps_e[n],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps_g.norm_squared() + self.amps_e.norm_squared()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &AtomFieldState) -> C64 {
        self.amps_g.dotc(&other.amps_g) + self.amps_e.dotc(&other.amps_e)
    }

    pub fn fidelity(&self, other: &AtomFieldState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// |C_e|² summed minus |C_g|² summed.
    pub fn inversion(&self) -> f64 {
        self.amps_e.norm_squared() - self.amps_g.norm_squared()
    }
}

/// Dense complex operator on the field space or on atom⊗field.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    ncut: usize,
    with_atom: bool,
    matrix: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_matrix(ncut: usize, with_atom: bool, matrix: DMatrix<C64>) -> Self {
        let dim = if with_atom { 2 * (ncut + 1) } else { ncut + 1 };
        assert_eq!(
            matrix.shape(),
            (dim, dim),
            "matrix shape does not match ncut"
        );
        Self {
            ncut,
            with_atom,
            matrix,
        }
    }

    pub fn zeros(ncut: usize, with_atom: bool) -> Self {
        let dim = if with_atom { 2 * (ncut + 1) } else { ncut + 1 };
        Self {
            ncut,
            with_atom,
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn ncut(&self) -> usize {
        self.ncut
    }

    pub fn with_atom(&self) -> bool {
        self.with_atom
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            ..*self
        }
    }

    /// max |M − M†|.
    pub fn hermiticity_residual(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Hermitian to 1e-12 relative to the largest entry.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= 1e-12 * self.max_abs().max(1.0)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    pub fn apply_fock(&self, v: &FockVector) -> FockVector {
        assert!(
            !self.with_atom && v.ncut == self.ncut,
            "operator/state mismatch"
        );
        FockVector {
            ncut: self.ncut,
            amps: &self.matrix * &v.amps,
            tail_weight: 0.0,
        }
    }

    pub fn product(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), other.dim());
        Self {
            matrix: &self.matrix * &other.matrix,
            ..*self
        }
    }

    pub fn sum(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), other.dim());
        Self {
            matrix: &self.matrix + &other.matrix,
            ..*self
        }
    }

    pub fn scaled(&self, factor: C64) -> OperatorMatrix {
        Self {
            matrix: &self.matrix * factor,
            ..*self
        }
    }

    /// A·B − B·A.
    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        Self {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            ..*self
        }
    }
}

fn check_ncut(ncut: usize) -> Result<()> {
    if ncut < 1 {
        return Err(Error::InvalidInput(format!(
            "ncut must be >= 1, got {ncut}"
        )));
    }
    Ok(())
}

/// Annihilation operator with ⟨n−1|ã|n⟩ = √n.
pub fn build_annihilation(ncut: usize) -> Result<OperatorMatrix> {
    check_ncut(ncut)?;
    let mut m = DMatrix::zeros(ncut + 1, ncut + 1);
    for n in 1..=ncut {
        m[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    Ok(OperatorMatrix::from_matrix(ncut, false, m))
}

pub fn build_creation(ncut: usize) -> Result<OperatorMatrix> {
    Ok(build_annihilation(ncut)?.adjoint())
}

/// Ñ = ã†ã, diagonal 0..=ncut.
pub fn build_number(ncut: usize) -> Result<OperatorMatrix> {
    check_ncut(ncut)?;
    let diag = DVector::from_fn(ncut + 1, |n, _| C64::from(n as f64));
    Ok(OperatorMatrix::from_matrix(
        ncut,
        false,
        DMatrix::from_diagonal(&diag),
    ))
}

pub fn identity(ncut: usize) -> OperatorMatrix {
    OperatorMatrix::from_matrix(ncut, false, DMatrix::identity(ncut + 1, ncut + 1))
}

/// σ₊ = |e⟩⟨g| in the (g, e) basis.
pub fn sigma_plus() -> Matrix2<C64> {
    Matrix2::new(ZERO, ZERO, ONE, ZERO)
}

pub fn sigma_minus() -> Matrix2<C64> {
    Matrix2::new(ZERO, ONE, ZERO, ZERO)
}

/// σ₃ = |e⟩⟨e| − |g⟩⟨g|.
pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(-ONE, ZERO, ZERO, ONE)
}

pub fn atom_identity() -> Matrix2<C64> {
    Matrix2::identity()
}

/// atom ⊗ field on the `[ground | excited]` layout.
pub fn atom_field(atom: &Matrix2<C64>, field: &OperatorMatrix) -> OperatorMatrix {
    assert!(!field.with_atom, "field operator already carries the atom");
    let atom = DMatrix::from_column_slice(2, 2, atom.as_slice());
    OperatorMatrix::from_matrix(field.ncut, true, atom.kronecker(&field.matrix))
}

/// Probability carried by the two highest Fock levels of a field or atom-field vector.
pub fn edge_weight(v: &DVector<C64>, ncut: usize) -> f64 {
    let d = ncut + 1;
    let blocks = v.len() / d;
    let lo = ncut.saturating_sub(1);
    (0..blocks)
        .flat_map(|b| (lo..=ncut).map(move |n| b * d + n))
        .map(|i| v[i].norm_sqr())
        .sum()
}

/// Coherent state e^{−|α|²/2} Σ αⁿ/√n! |n⟩, renormalized on the truncated basis.
///
/// Fails when the weight above `ncut` reaches `tail_tol`.
pub fn coherent_state(alpha: C64, ncut: usize, tail_tol: f64) -> Result<FockVector> {
    check_ncut(ncut)?;
    let mut amps = DVector::zeros(ncut + 1);
    amps[0] = C64::from((-0.5 * alpha.norm_sqr()).exp());
    for n in 1..=ncut {
        amps[n] = amps[n - 1] * alpha / (n as f64).sqrt();
    }
    let tail = coherent_tail_weight(alpha.norm_sqr(), ncut, amps[ncut].norm_sqr());
    if tail >= tail_tol {
        return Err(Error::Truncation(format!(
            "coherent state |alpha| = {:.3} leaves tail weight {tail:.3e} >= {tail_tol:.1e} above ncut = {ncut}",
            alpha.norm()
        )));
    }
    let norm = amps.norm();
    amps /= C64::from(norm);
    Ok(FockVector {
        ncut,
        amps,
        tail_weight: tail,
    })
}

/// Σ_{n>ncut} Poisson(n; mean), summed forward from the last kept term.
fn coherent_tail_weight(mean: f64, ncut: usize, last_prob: f64) -> f64 {
    let mut term = last_prob;
    let mut tail = 0.0;
    let mut n = ncut + 1;
    loop {
        term *= mean / n as f64;
        tail += term;
        if term <= tail * 1e-17 || term < 1e-300 {
            break;
        }
        n += 1;
        if n > ncut + 100_000 {
            break;
        }
    }
    tail
}

/// Laguerre polynomial L_m(x) by the upward three-term recurrence.
pub fn laguerre(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..m {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// k_{α,m} = (L_m(−|α|²)·m!)^{1/2}, the norm of ã†ᵐ|α⟩.
pub fn photon_added_norm(alpha: C64, m: usize) -> f64 {
    (laguerre(m, -alpha.norm_sqr()) * factorial(m)).sqrt()
}

/// Photon-added coherent state ã†ᵐ|α⟩ / k_{α,m}.
///
/// The truncated norm of ã†ᵐ|α⟩ has to match k_{α,m}² to 1e-8 relative.
pub fn photon_added_coherent_state(alpha: C64, m: usize, ncut: usize) -> Result<FockVector> {
    check_ncut(ncut)?;
    if m > ncut {
        return Err(Error::Truncation(format!(
            "{m} added photons exceed ncut = {ncut}"
        )));
    }
    // Untruncated coherent coefficients up to ncut - m, then shift by m.
    let mut coh = vec![ZERO; ncut + 1 - m];
    coh[0] = C64::from((-0.5 * alpha.norm_sqr()).exp());
    for n in 1..coh.len() {
        coh[n] = coh[n - 1] * alpha / (n as f64).sqrt();
    }
    let mut amps = DVector::zeros(ncut + 1);
    for (k, c) in coh.iter().enumerate() {
        // √((k+m)!/k!)
        let raise: f64 = (k + 1..=k + m).map(|j| (j as f64).sqrt()).product();
        amps[k + m] = c * raise;
    }
    let expected = laguerre(m, -alpha.norm_sqr()) * factorial(m);
    let achieved = amps.norm_squared();
    let rel = (achieved - expected).abs() / expected;
    if rel > 1e-8 {
        return Err(Error::Truncation(format!(
            "photon-added state |alpha| = {:.3}, m = {m}: truncated norm deviates by {rel:.3e} at ncut = {ncut}",
            alpha.norm()
        )));
    }
    amps /= C64::from(achieved.sqrt());
    Ok(FockVector {
        ncut,
        amps,
        tail_weight: rel,
    })
}
