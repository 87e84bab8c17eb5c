//! Floating-point verification of dagger Frobenius structures on complex
//! vector spaces.
//!
//! The relational development elsewhere in this crate is exact; this module
//! checks that its headline dichotomy survives the passage to Hilbert
//! spaces. Two families of structures are built concretely as complex
//! matrices: the diagonal (classical) structure on `C^n`, which is
//! commutative, and the full matrix algebra on `C^(n*n)` with the special
//! normalisation, which is not. The axiom checks accept a tolerance; the
//! broadcast verifier draws seeded random densities inside the algebra and
//! confirms that copying through the comultiplication leaves both marginals
//! fixed — but only after the structure has passed a commutativity gate,
//! since that is the property the dichotomy turns on.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::frobenius::FrobeniusAxiom;

#[derive(Debug, Error)]
pub enum FhilbError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The structure fails one of the defining axioms at the tolerance.
    #[error("structure violates axioms: {0:?}")]
    NotFrobenius(Vec<FrobeniusAxiom>),
    /// Broadcast verification refuses structures that are not commutative.
    #[error("structure is not commutative: largest deviation {residual}")]
    NotCommutative { residual: f64 },
    /// A random density was not returned intact by both marginals.
    #[error("broadcast marginal deviates by {error} on trial {trial}")]
    BroadcastFailed { trial: usize, error: f64 },
}

pub type FhilbResult<T> = Result<T, FhilbError>;

/// A dense complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product; indices pair as `(i1, i2) -> i1 * rows2 + i2`,
    /// matching the tensor conventions used throughout the crate.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

/// The swap `C^d1 (x) C^d2 -> C^d2 (x) C^d1` as a permutation matrix.
pub fn swap_matrix(d1: usize, d2: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            m.set(j * d1 + i, i * d2 + j, Complex64::new(1.0, 0.0));
        }
    }
    m
}

/// A candidate dagger Frobenius structure presented by matrices: a
/// multiplication `C^N (x) C^N -> C^N` and a unit `C -> C^N`.
#[derive(Debug, Clone)]
pub struct MatrixFrobenius {
    dim: usize,
    mult: CMatrix,
    unit: CMatrix,
}

impl MatrixFrobenius {
    pub fn new(mult: CMatrix, unit: CMatrix) -> FhilbResult<Self> {
        let dim = mult.rows();
        if mult.cols() != dim * dim {
            return Err(FhilbError::Dimension(format!(
                "multiplication must be {dim} x {}, found {dim} x {}",
                dim * dim,
                mult.cols()
            )));
        }
        if unit.rows() != dim || unit.cols() != 1 {
            return Err(FhilbError::Dimension(format!(
                "unit must be {dim} x 1, found {} x {}",
                unit.rows(),
                unit.cols()
            )));
        }
        Ok(MatrixFrobenius { dim, mult, unit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &CMatrix {
        &self.mult
    }

    pub fn unit(&self) -> &CMatrix {
        &self.unit
    }

    pub fn comult(&self) -> CMatrix {
        self.mult.dagger()
    }

    pub fn counit(&self) -> CMatrix {
        self.unit.dagger()
    }

    /// Axioms failing at the given tolerance, in declaration order.
    pub fn violated_axioms(&self, tol: f64) -> Vec<FrobeniusAxiom> {
        let n = self.dim;
        let id = CMatrix::identity(n);
        let m = &self.mult;
        let u = &self.unit;
        let d = self.comult();
        let mut out = Vec::new();

        let assoc_l = m.mul(&m.kron(&id));
        let assoc_r = m.mul(&id.kron(m));
        if !assoc_l.approx_eq(&assoc_r, tol) {
            out.push(FrobeniusAxiom::Associativity);
        }
        if !m.mul(&u.kron(&id)).approx_eq(&id, tol) {
            out.push(FrobeniusAxiom::LeftUnit);
        }
        if !m.mul(&id.kron(u)).approx_eq(&id, tol) {
            out.push(FrobeniusAxiom::RightUnit);
        }
        let middle = d.mul(m);
        let frob_l = id.kron(m).mul(&d.kron(&id));
        let frob_r = m.kron(&id).mul(&id.kron(&d));
        if !frob_l.approx_eq(&middle, tol) || !frob_r.approx_eq(&middle, tol) {
            out.push(FrobeniusAxiom::FrobeniusLaw);
        }
        let pairing = self.counit().mul(m);
        if !pairing.mul(&swap_matrix(n, n)).approx_eq(&pairing, tol) {
            out.push(FrobeniusAxiom::Symmetry);
        }
        if self.speciality_residual() > tol {
            out.push(FrobeniusAxiom::Speciality);
        }
        out
    }

    /// Largest deviation of `mult . comult` from the identity.
    pub fn speciality_residual(&self) -> f64 {
        self.mult.mul(&self.comult()).max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Largest deviation of `mult . swap` from `mult`.
    pub fn commutativity_residual(&self) -> f64 {
        self.mult.mul(&swap_matrix(self.dim, self.dim)).max_abs_diff(&self.mult)
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        self.commutativity_residual() <= tol
    }

    /// Conjugates the structure by a basis permutation.
    pub fn permuted(&self, perm: &[usize]) -> MatrixFrobenius {
        assert_eq!(perm.len(), self.dim, "permutation must cover the basis");
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for (from, &to) in perm.iter().enumerate() {
            p.set(to, from, Complex64::new(1.0, 0.0));
        }
        let pd = p.dagger();
        MatrixFrobenius {
            dim: self.dim,
            mult: p.mul(&self.mult).mul(&pd.kron(&pd)),
            unit: p.mul(&self.unit),
        }
    }
}

/// The commutative structure on `C^n` copying a fixed orthonormal basis:
/// multiplication sends `e_i (x) e_j` to `delta_ij e_i` and the unit is the
/// all-ones vector.
pub fn diagonal_structure(n: usize) -> MatrixFrobenius {
    assert!(n >= 1, "structures need dimension at least one");
    let mut mult = CMatrix::zeros(n, n * n);
    for i in 0..n {
        mult.set(i, i * n + i, Complex64::new(1.0, 0.0));
    }
    let unit = CMatrix::from_fn(n, 1, |_, _| Complex64::new(1.0, 0.0));
    MatrixFrobenius::new(mult, unit).expect("diagonal structure dimensions line up")
}

/// The full matrix algebra on `C^(n*n)` with the normalisation that makes
/// it special: multiplication is matrix multiplication scaled by
/// `n^(-1/2)`, and the unit is `sqrt(n)` times the vectorised identity.
pub fn matrix_algebra_structure(n: usize) -> MatrixFrobenius {
    let raw = raw_matrix_algebra(n);
    MatrixFrobenius::new(
        raw.mult.scale(1.0 / (n as f64).sqrt()),
        raw.unit.scale((n as f64).sqrt()),
    )
    .expect("matrix algebra dimensions line up")
}

/// The matrix algebra without the special normalisation: plain matrix
/// multiplication and the vectorised identity. Useful for exhibiting the
/// exact size of the speciality failure.
pub fn raw_matrix_algebra(n: usize) -> MatrixFrobenius {
    assert!(n >= 1, "structures need dimension at least one");
    let dim = n * n;
    let mut mult = CMatrix::zeros(dim, dim * dim);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // vec(AB)_(i,j) collects A_(i,k) B_(k,j).
                let row = i * n + j;
                let col = (i * n + k) * dim + (k * n + j);
                mult.set(row, col, Complex64::new(1.0, 0.0));
            }
        }
    }
    let mut unit = CMatrix::zeros(dim, 1);
    for i in 0..n {
        unit.set(i * n + i, 0, Complex64::new(1.0, 0.0));
    }
    MatrixFrobenius::new(mult, unit).expect("matrix algebra dimensions line up")
}

/// Outcome of a successful broadcast verification.
#[derive(Debug, Clone)]
pub struct BroadcastReport {
    pub trials: usize,
    /// Largest marginal deviation observed over all trials.
    pub max_marginal_error: f64,
    pub commutativity_residual: f64,
}

/// Checks that copying through the comultiplication broadcasts random
/// densities of a commutative structure.
///
/// The structure must satisfy the axioms and be commutative at the given
/// tolerance; otherwise the corresponding error is returned without any
/// sampling. Densities are produced inside the algebra by multiplying a
/// seeded Gaussian element with its conjugate and normalising by the
/// counit; both marginals of the copied state must return the density to
/// within the tolerance.
pub fn verify_commutative_broadcast(
    s: &MatrixFrobenius,
    trials: usize,
    tol: f64,
    seed: u64,
) -> FhilbResult<BroadcastReport> {
    let violated = s.violated_axioms(tol);
    if !violated.is_empty() {
        return Err(FhilbError::NotFrobenius(violated));
    }
    let residual = s.commutativity_residual();
    if residual > tol {
        return Err(FhilbError::NotCommutative { residual });
    }

    let n = s.dim();
    let id = CMatrix::identity(n);
    let comult = s.comult();
    let counit = s.counit();
    let left_marginal = counit.kron(&id);
    let right_marginal = id.kron(&counit);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    for trial in 0..trials {
        let density = loop {
            let g = CMatrix::from_fn(n, 1, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let p = s.mult().mul(&g.kron(&g.conjugate()));
            let total = counit.mul(&p).get(0, 0);
            if total.norm() > 1e-9 {
                break p.scale(1.0 / total.norm());
            }
        };
        let copied = comult.mul(&density);
        let error = left_marginal
            .mul(&copied)
            .max_abs_diff(&density)
            .max(right_marginal.mul(&copied).max_abs_diff(&density));
        if error > tol {
            return Err(FhilbError::BroadcastFailed { trial, error });
        }
        max_error = max_error.max(error);
    }
    Ok(BroadcastReport { trials, max_marginal_error: max_error, commutativity_residual: residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    const EXACT: f64 = 1e-12;

    #[test]
    fn kronecker_and_multiplication_basics() {
        let a = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i * 2 + j) as f64, 0.0));
        let id3 = CMatrix::identity(3);
        let k = a.kron(&id3);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(0 * 3 + 1, 1 * 3 + 1), a.get(0, 1));
        assert!(a.mul(&CMatrix::identity(2)).approx_eq(&a, 0.0));
        let sw = swap_matrix(2, 3);
        assert!(sw.mul(&sw.dagger()).approx_eq(&CMatrix::identity(6), 0.0));
    }

    #[test]
    fn diagonal_structures_satisfy_every_axiom() {
        for n in 1..=5 {
            let s = diagonal_structure(n);
            assert!(s.violated_axioms(EXACT).is_empty(), "axioms fail at dimension {n}");
            assert!(s.speciality_residual() <= EXACT);
            assert!(s.commutativity_residual() <= EXACT);
        }
    }

    #[test]
    fn matrix_algebras_are_frobenius_but_not_commutative() {
        for n in 2..=3 {
            let s = matrix_algebra_structure(n);
            assert!(s.violated_axioms(1e-9).is_empty(), "axioms fail at size {n}");
            let expected = 1.0 / (n as f64).sqrt();
            assert!((s.commutativity_residual() - expected).abs() < EXACT);
        }
        assert!(matrix_algebra_structure(1).is_commutative(EXACT));
    }

    #[test]
    fn commutativity_residual_of_qubit_algebra_is_pinned() {
        let r = matrix_algebra_structure(2).commutativity_residual();
        assert!((r - FRAC_1_SQRT_2).abs() < EXACT);
        assert!(r > 0.1);
    }

    #[test]
    fn unnormalised_matrix_algebra_misses_speciality_by_its_size() {
        for n in 2..=3 {
            let raw = raw_matrix_algebra(n);
            assert!((raw.speciality_residual() - (n as f64 - 1.0)).abs() < EXACT);
            assert!(raw.violated_axioms(0.1).contains(&FrobeniusAxiom::Speciality));
        }
    }

    #[test]
    fn broadcast_verifier_accepts_diagonal_structures() {
        let report = verify_commutative_broadcast(&diagonal_structure(4), 25, 1e-9, 7)
            .expect("diagonal structures broadcast");
        assert_eq!(report.trials, 25);
        assert!(report.max_marginal_error <= 1e-9);
        // Same seed, same arithmetic.
        let again = verify_commutative_broadcast(&diagonal_structure(4), 25, 1e-9, 7).unwrap();
        assert_eq!(report.max_marginal_error.to_bits(), again.max_marginal_error.to_bits());
    }

    #[test]
    fn broadcast_verifier_refuses_noncommutative_structures() {
        let err = verify_commutative_broadcast(&matrix_algebra_structure(2), 10, 0.1, 7)
            .expect_err("the qubit algebra must be refused");
        match err {
            FhilbError::NotCommutative { residual } => {
                assert!((residual - FRAC_1_SQRT_2).abs() < EXACT)
            }
            other => panic!("expected a commutativity refusal, got {other}"),
        }
    }

    #[test]
    fn broadcast_verifier_refuses_broken_structures() {
        let broken = MatrixFrobenius::new(
            diagonal_structure(3).mult().clone(),
            CMatrix::zeros(3, 1),
        )
        .unwrap();
        match verify_commutative_broadcast(&broken, 5, 1e-9, 1) {
            Err(FhilbError::NotFrobenius(axioms)) => {
                assert!(axioms.contains(&FrobeniusAxiom::LeftUnit))
            }
            other => panic!("expected an axiom refusal, got {other:?}"),
        }
    }

    #[test]
    fn permuting_the_basis_changes_nothing() {
        let s = diagonal_structure(3).permuted(&[2, 0, 1]);
        assert!(s.violated_axioms(EXACT).is_empty());
        let report = verify_commutative_broadcast(&s, 10, 1e-9, 11).unwrap();
        assert!(report.max_marginal_error <= 1e-9);
    }
}
