//! Entropy, maximal information, relative entropy of coherence and their
//! instantaneous rates along a generator. All quantities are in nats.

use crate::dynamics::{lindblad_apply, DensityMatrix, Lindbladian};
use crate::error::{Error, Result};
use crate::qmath::{
    check_clip, schatten_from_eigenvalues, CMatrix, HermitianMatrix, NormKind, Spectrum, C64,
    DEFAULT_CLIP, POSITIVITY_TOLERANCE,
};

/// Orthonormal basis defining incoherent states. Columns are basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceBasis {
    vectors: CMatrix,
    computational: bool,
}

impl ReferenceBasis {
    pub fn computational(dim: usize) -> Self {
        Self {
            vectors: CMatrix::identity(dim, dim),
            computational: true,
        }
    }

    pub fn new(vectors: CMatrix) -> Result<Self> {
        if !vectors.is_square() || vectors.nrows() == 0 {
            return Err(Error::InvalidBasis("basis matrix must be square".into()));
        }
        let n = vectors.nrows();
        let gram = vectors.adjoint() * &vectors;
        let err = (gram - CMatrix::identity(n, n)).camax();
        if !(err <= 1e-10) {
            return Err(Error::InvalidBasis(format!(
                "columns are not orthonormal (deviation {err:.3e})"
            )));
        }
        let computational = vectors == CMatrix::identity(n, n);
        Ok(Self {
            vectors,
            computational,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `⟨i|A|i⟩` for every basis vector.
    pub fn diagonal_of(&self, a: &CMatrix) -> Vec<f64> {
        let n = self.dim();
        if self.computational {
            return (0..n).map(|i| a[(i, i)].re).collect();
        }
        let av = a * &self.vectors;
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| self.vectors[(i, j)].conj() * av[(i, j)])
                    .sum::<C64>()
                    .re
            })
            .collect()
    }

    /// `Σ_i values[i] |i⟩⟨i|`.
    pub fn embed_diagonal(&self, values: &[f64]) -> HermitianMatrix {
        if self.computational {
            return HermitianMatrix::from_diagonal(values);
        }
        let n = self.dim();
        let v = &self.vectors;
        let m = CMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * values[k] * v[(c, k)].conj())
                .sum()
        });
        crate::qmath::hermitize(&m)
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// An instantaneous rate, flagged when the eigenvalue floor was needed to
/// take the logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rate {
    pub value: f64,
    pub regularized: bool,
}

/// `-Σ p ln p`, skipping entries below `clip`.
fn shannon(values: &[f64], clip: f64) -> f64 {
    values
        .iter()
        .filter(|&&p| p >= clip)
        .map(|&p| -p * p.ln())
        .sum()
}

fn clipped_logs(values: &[f64], clip: f64) -> Vec<f64> {
    values.iter().map(|&p| p.max(clip).ln()).collect()
}

/// Spectral data of a state from which every functional and log-norm follows
/// without re-diagonalizing.
#[derive(Clone, Debug)]
pub struct SpectralState {
    spectrum: Spectrum,
    logs: Vec<f64>,
    clip: f64,
}

impl SpectralState {
    pub fn new(rho: &DensityMatrix, clip: f64) -> Result<Self> {
        check_clip(clip)?;
        let spectrum = rho.as_hermitian().eigh();
        if spectrum.min() < -POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive {
                min_eigenvalue: spectrum.min(),
            });
        }
        let logs = clipped_logs(&spectrum.eigenvalues, clip);
        Ok(Self {
            spectrum,
            logs,
            clip,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn clipped(&self) -> bool {
        self.spectrum.min() < self.clip
    }

    pub fn entropy(&self) -> f64 {
        let ln_d = (self.eigenvalues().len() as f64).ln();
        shannon(self.eigenvalues(), self.clip).clamp(0.0, ln_d)
    }

    /// Schatten norm of `ln ρ` (with the eigenvalue floor).
    pub fn log_norm(&self, kind: NormKind) -> f64 {
        schatten_from_eigenvalues(&self.logs, kind)
    }

    /// `tr(A ln ρ)`.
    pub fn trace_with_log(&self, a: &CMatrix) -> f64 {
        self.spectrum
            .diagonal_in_eigenbasis(a)
            .iter()
            .zip(&self.logs)
            .map(|(x, l)| x * l)
            .sum()
    }
}

/// The dephased state `ρ^D` represented by its populations in a basis.
#[derive(Clone, Debug)]
pub struct DiagonalState {
    populations: Vec<f64>,
    logs: Vec<f64>,
    clip: f64,
}

impl DiagonalState {
    pub fn new(rho: &DensityMatrix, basis: &ReferenceBasis, clip: f64) -> Result<Self> {
        check_clip(clip)?;
        basis.check(rho.dim())?;
        let populations = basis.diagonal_of(rho.matrix());
        let logs = clipped_logs(&populations, clip);
        Ok(Self {
            populations,
            logs,
            clip,
        })
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn clipped(&self) -> bool {
        self.populations.iter().any(|&p| p < self.clip)
    }

    pub fn entropy(&self) -> f64 {
        let ln_d = (self.populations.len() as f64).ln();
        shannon(&self.populations, self.clip).clamp(0.0, ln_d)
    }

    pub fn log_norm(&self, kind: NormKind) -> f64 {
        schatten_from_eigenvalues(&self.logs, kind)
    }

    /// `tr(A ln ρ^D)` for `A` diagonal in the same basis, given by its diagonal.
    pub fn trace_with_log(&self, diagonal: &[f64]) -> f64 {
        diagonal.iter().zip(&self.logs).map(|(x, l)| x * l).sum()
    }
}

/// von Neumann entropy `-tr ρ ln ρ`; eigenvalues below `clip` contribute 0.
pub fn entropy(rho: &DensityMatrix, clip: f64) -> Result<f64> {
    Ok(SpectralState::new(rho, clip)?.entropy())
}

/// `ln d - S(ρ)`.
pub fn max_information(rho: &DensityMatrix) -> Result<f64> {
    let ln_d = (rho.dim() as f64).ln();
    Ok((ln_d - entropy(rho, DEFAULT_CLIP)?).max(0.0))
}

/// Completely dephasing channel in `basis`.
pub fn dephase(rho: &DensityMatrix, basis: &ReferenceBasis) -> Result<DensityMatrix> {
    basis.check(rho.dim())?;
    let populations = basis.diagonal_of(rho.matrix());
    Ok(DensityMatrix::normalized_unchecked(
        basis.embed_diagonal(&populations).matrix(),
    ))
}

/// Relative entropy of coherence `S(ρ^D) - S(ρ)`.
pub fn coherence(rho: &DensityMatrix, basis: &ReferenceBasis, clip: f64) -> Result<f64> {
    let full = SpectralState::new(rho, clip)?;
    let diag = DiagonalState::new(rho, basis, clip)?;
    Ok((diag.entropy() - full.entropy()).max(0.0))
}

/// `dS/dt = -tr{L_t(ρ) ln ρ}`.
pub fn entropy_rate(l: &Lindbladian, rho: &DensityMatrix, t: f64, clip: f64) -> Result<Rate> {
    let action = lindblad_apply(l, rho, t)?;
    let state = SpectralState::new(rho, clip)?;
    Ok(Rate {
        value: -state.trace_with_log(action.matrix()),
        regularized: state.clipped(),
    })
}

/// `dC/dt = -tr{L_t(ρ^D) ln ρ^D} + tr{L_t(ρ) ln ρ}` with `L_t(ρ^D)` taken as
/// the basis diagonal of `L_t(ρ)`.
pub fn coherence_rate(
    l: &Lindbladian,
    rho: &DensityMatrix,
    basis: &ReferenceBasis,
    t: f64,
    clip: f64,
) -> Result<Rate> {
    let action = lindblad_apply(l, rho, t)?;
    let state = SpectralState::new(rho, clip)?;
    let diag = DiagonalState::new(rho, basis, clip)?;
    let action_diag = basis.diagonal_of(action.matrix());
    Ok(Rate {
        value: -diag.trace_with_log(&action_diag) + state.trace_with_log(action.matrix()),
        regularized: state.clipped() || diag.clipped(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::pauli;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    const CLIP: f64 = DEFAULT_CLIP;

    fn plus() -> DensityMatrix {
        DensityMatrix::bloch_state(FRAC_PI_2)
    }

    #[test]
    fn entropy_examples() {
        assert!(
            entropy(&DensityMatrix::bloch_state(0.3), CLIP)
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!((entropy(&DensityMatrix::maximally_mixed(2), CLIP).unwrap() - LN_2).abs() < 1e-15);
        let expected = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        let s = entropy(&DensityMatrix::diagonal(&[0.75, 0.25]).unwrap(), CLIP).unwrap();
        assert!((s - expected).abs() < 1e-15);
        assert!((s - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn information_examples() {
        assert!((max_information(&DensityMatrix::bloch_state(1.0)).unwrap() - LN_2).abs() < 1e-12);
        for d in 1..6 {
            assert!(
                max_information(&DensityMatrix::maximally_mixed(d))
                    .unwrap()
                    .abs()
                    < 1e-14
            );
        }
        let i = max_information(&DensityMatrix::diagonal(&[0.75, 0.25]).unwrap()).unwrap();
        assert!((i - 0.130812).abs() < 1e-6);
    }

    #[test]
    fn dephase_examples() {
        let basis = ReferenceBasis::computational(2);
        let diag = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        assert_eq!(dephase(&diag, &basis).unwrap(), diag);
        let d = dephase(&plus(), &basis).unwrap();
        assert!((d.matrix() - DensityMatrix::maximally_mixed(2).matrix()).norm() < 1e-15);
        let twice = dephase(&d, &basis).unwrap();
        assert_eq!(twice, d);
    }

    #[test]
    fn coherence_examples() {
        let basis = ReferenceBasis::computational(2);
        assert_eq!(
            coherence(&DensityMatrix::diagonal(&[0.4, 0.6]).unwrap(), &basis, CLIP).unwrap(),
            0.0
        );
        assert!((coherence(&plus(), &basis, CLIP).unwrap() - LN_2).abs() < 1e-12);
        let c = coherence(
            &DensityMatrix::bloch_state(std::f64::consts::FRAC_PI_3),
            &basis,
            CLIP,
        )
        .unwrap();
        assert!((c - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn coherence_in_rotated_basis() {
        let s = 0.5f64.sqrt();
        let hadamard = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
            ],
        );
        let basis = ReferenceBasis::new(hadamard).unwrap();
        // |+⟩ is incoherent in the Hadamard basis, |0⟩ maximally coherent
        assert!(coherence(&plus(), &basis, CLIP).unwrap() < 1e-12);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!((coherence(&zero, &basis, CLIP).unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn basis_validation() {
        assert!(ReferenceBasis::new(CMatrix::identity(2, 2) * C64::new(2.0, 0.0)).is_err());
        assert!(ReferenceBasis::new(CMatrix::zeros(2, 3)).is_err());
        let basis = ReferenceBasis::computational(3);
        assert!(matches!(
            dephase(&plus(), &basis),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unitary_and_fixed_point_rates_vanish() {
        let rho = DensityMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.7, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.3, 0.0),
            ],
        ))
        .unwrap();
        let unitary = Lindbladian::new(HermitianMatrix::new(pauli::x() + pauli::z()).unwrap());
        assert!(entropy_rate(&unitary, &rho, 0.0, CLIP).unwrap().value.abs() < 1e-14);

        let damping = Lindbladian::zero(2)
            .with_jump(pauli::lowering(), 1.0)
            .unwrap();
        let ground = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let rate = entropy_rate(&damping, &ground, 0.0, CLIP).unwrap();
        assert_eq!(rate.value, 0.0);
        assert!(rate.regularized);
    }

    #[test]
    fn coherence_rate_vanishes_without_coherence_dynamics() {
        let basis = ReferenceBasis::computational(2);
        let damping = Lindbladian::zero(2)
            .with_jump(pauli::lowering(), 1.0)
            .unwrap();
        let diag = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        assert!(
            coherence_rate(&damping, &diag, &basis, 0.0, CLIP)
                .unwrap()
                .value
                .abs()
                < 1e-15
        );

        let diagonal_h = Lindbladian::new(HermitianMatrix::new(pauli::z()).unwrap());
        let rho = DensityMatrix::bloch_state(0.8);
        let rate = coherence_rate(&diagonal_h, &rho, &basis, 0.0, CLIP).unwrap();
        assert!(rate.value.abs() < 1e-13);
    }
}
