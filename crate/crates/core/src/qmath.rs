//! Dense Hermitian linear algebra: eigendecomposition, spectrally clipped
//! matrix logarithm and the Schatten norms.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`. Matrices are
//! assumed to be small (a few dozen rows at most).
use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use nalgebra::{linalg::SymmetricEigen, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
/// Default eigenvalue floor used when taking logarithms of density matrices.
pub const DEFAULT_CLIP: f64 = 1e-15;
/// Largest admissible eigenvalue floor.
pub const MAX_CLIP: f64 = 1e-6;
/// Symmetry violations above this are rejected rather than symmetrized.
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;
/// Eigenvalues below `-POSITIVITY_TOLERANCE` make an operator non-positive.
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;
pub fn check_clip(clip: f64) -> Result<()> {
    if clip > 0.0 && clip <= MAX_CLIP {
        Ok(())
    } else {
        Err(Error::InvalidClip(clip))
    }
}
/// Largest entrywise deviation `|a_ij - conj(a_ji)|`.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}
/// A square complex matrix that is exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);
impl HermitianMatrix {
    /// Accepts `a` if its symmetry violation is at most
    /// [`HERMITIAN_TOLERANCE`] and symmetrizes away the residue.
    pub fn new(a: CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        if a.nrows() == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let deviation = hermiticity_deviation(&a);
        if !(deviation <= HERMITIAN_TOLERANCE) {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(hermitize(&a))
    }
    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }
    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }
    /// Real diagonal matrix.
    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
    /// `tr(self · other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        trace_product(&self.0, &other.0).re
    }
    /// Frobenius norm; coincides with the Hilbert-Schmidt norm.
    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }
    pub fn eigh(&self) -> Spectrum {
        eigh(self)
    }
    pub fn schatten(&self, kind: NormKind) -> f64 {
        schatten_norm(self, kind)
    }
    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }
}
/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, each phase-fixed so that its first
    /// largest-magnitude component is real and positive.
    pub eigenvectors: CMatrix,
}
impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
    /// `V · diag(f(λ)) · V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let v = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fj = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        hermitize(&(scaled * v.adjoint()))
    }
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|x| x)
    }
    /// Diagonal of `V† A V`, i.e. `⟨v_i|A|v_i⟩` for every eigenvector.
    pub fn diagonal_in_eigenbasis(&self, a: &CMatrix) -> Vec<f64> {
        let v = &self.eigenvectors;
        let av = a * v;
        (0..self.dim())
            .map(|j| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.dim() {
                    acc += v[(i, j)].conj() * av[(i, j)];
                }
                acc.re
            })
            .collect()
    }
    pub fn schatten(&self, kind: NormKind) -> f64 {
        schatten_from_eigenvalues(&self.eigenvalues, kind)
    }
}
fn fix_phase(v: &mut CMatrix, col: usize) {
    let n = v.nrows();
    let largest = (0..n).map(|i| v[(i, col)].norm()).fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return;
    }
    let pivot = (0..n)
        .find(|&i| v[(i, col)].norm() >= largest * (1.0 - 1e-12))
        .unwrap_or(0);
    let z = v[(pivot, col)];
    let phase = z.conj() / z.norm();
    for i in 0..n {
        v[(i, col)] *= phase;
    }
}
fn compare_vectors(v: &CMatrix, a: usize, b: usize) -> Ordering {
    for i in 0..v.nrows() {
        let (x, y) = (v[(i, a)], v[(i, b)]);
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}
/// Ascending eigendecomposition with deterministic eigenvector phases.
pub fn eigh(a: &HermitianMatrix) -> Spectrum {
    let n = a.dim();
    let decomposition = SymmetricEigen::new(a.matrix().clone());
    let mut vectors = decomposition.eigenvectors;
    for j in 0..n {
        fix_phase(&mut vectors, j);
    }
    let values: Vec<f64> = decomposition.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .total_cmp(&values[j])
            .then_with(|| compare_vectors(&vectors, i, j))
    });
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}
/// Logarithm of a density matrix together with whether the eigenvalue floor
/// had to be applied.
#[derive(Clone, Debug)]
pub struct MatrixLog {
    pub matrix: HermitianMatrix,
    pub clipped: bool,
}
/// `V · diag(ln max(λ_i, clip)) · V†`.
pub fn matrix_log(rho: &DensityMatrix, clip: f64) -> Result<MatrixLog> {
    check_clip(clip)?;
    let spectrum = rho.as_hermitian().eigh();
    if spectrum.min() < -POSITIVITY_TOLERANCE {
        return Err(Error::NotPositive {
            min_eigenvalue: spectrum.min(),
        });
    }
    let clipped = spectrum.min() < clip;
    Ok(MatrixLog {
        matrix: spectrum.map(|x| x.max(clip).ln()),
        clipped,
    })
}
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Largest absolute eigenvalue.
    #[serde(alias = "operator")]
    Op,
    /// Hilbert-Schmidt (Frobenius).
    #[serde(alias = "hilbert-schmidt")]
    Hs,
    /// Trace norm, sum of absolute eigenvalues.
    #[serde(alias = "trace")]
    Tr,
}
pub fn schatten_from_eigenvalues(eigenvalues: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::Op => eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
        NormKind::Hs => eigenvalues.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormKind::Tr => eigenvalues.iter().map(|x| x.abs()).sum(),
    }
}
pub fn schatten_norm(a: &HermitianMatrix, kind: NormKind) -> f64 {
    match kind {
        // sqrt(tr A†A) needs no diagonalization
        NormKind::Hs => a.frobenius(),
        _ => schatten_from_eigenvalues(&eigh(a).eigenvalues, kind),
    }
}
/// `(A + A†) / 2`.
///
/// Panics if `a` is not square.
pub fn hermitize(a: &CMatrix) -> HermitianMatrix {
    assert!(a.is_square(), "hermitize needs a square matrix");
    let n = a.nrows();
    let out = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    HermitianMatrix(out)
}
/// Pauli matrices in the computational basis `{|0⟩, |1⟩}`.
pub mod pauli {
    use super::{CMatrix, C64};
    fn m(entries: [C64; 4]) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &entries)
    }
    const O: C64 = C64::new(0.0, 0.0);
    const I: C64 = C64::new(1.0, 0.0);
    pub fn x() -> CMatrix {
        m([O, I, I, O])
    }
    pub fn y() -> CMatrix {
        m([O, C64::new(0.0, -1.0), C64::new(0.0, 1.0), O])
    }
    pub fn z() -> CMatrix {
        m([I, O, O, -I])
    }
    /// `|1⟩⟨0|`; with `|0⟩` the excited level this lowers the energy.
    pub fn lowering() -> CMatrix {
        m([O, O, I, O])
    }
    /// `|0⟩⟨1|`.
    pub fn raising() -> CMatrix {
        m([O, I, O, O])
    }
}
