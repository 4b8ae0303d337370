use serde::{Deserialize, Serialize};

use super::matrix::{c, re, ComplexMatrix, Dim, C64};
use super::spectral::{eig_herm, HermitianEigen};
use crate::error::{Error, Result};
use crate::tolerance;

/// A validated density operator over one or two qubits.
///
/// Hermitian, unit trace and positive semidefinite within the tolerances in
/// [`crate::tolerance`]. Values never change after construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate(&matrix)?;
        Ok(Self {
            matrix,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn maximally_mixed(dim: Dim) -> Self {
        let n = dim.size() as f64;
        Self {
            matrix: ComplexMatrix::identity(dim).scale(re(1.0 / n)),
            label: None,
        }
    }

    /// `|ψ⟩⟨ψ|` for the normalized `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::projector(psi)?)
    }

    /// Right-circular polarization `(|H⟩ − i|V⟩)/√2`.
    pub fn right_circular() -> Self {
        Self::pure(&[re(1.0), c(0.0, -1.0)]).expect("normalizable")
    }

    pub fn eigen(&self) -> HermitianEigen {
        eig_herm(&self.matrix).expect("density operators are Hermitian")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().values
    }

    /// `U ρ U†`; fails if the result leaves the set of density operators.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        let matrix = unitary.conjugate(&self.matrix)?;
        Ok(Self {
            matrix: validated(matrix)?,
            label: None,
        })
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        Ok(Self {
            matrix: validated(self.matrix.kron(&other.matrix)?)?,
            label: None,
        })
    }

    /// `tr{A ρ}`, real part.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        self.matrix.check_same_dim(observable)?;
        Ok((observable * &self.matrix).trace().re)
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            matrix: ComplexMatrix,
            #[serde(default)]
            label: Option<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let rho = DensityOperator::new(raw.matrix).map_err(serde::de::Error::custom)?;
        Ok(match raw.label {
            Some(l) => rho.with_label(l),
            None => rho,
        })
    }
}

fn validated(matrix: ComplexMatrix) -> Result<ComplexMatrix> {
    validate(&matrix)?;
    Ok(matrix)
}

fn validate(m: &ComplexMatrix) -> Result<()> {
    let deviation = m.hermiticity_defect();
    if !(deviation <= tolerance::HERMITIAN) {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace().re;
    if !((trace - 1.0).abs() <= tolerance::TRACE) {
        return Err(Error::TraceNotOne { trace });
    }
    let min_eigenvalue = eig_herm(m)?
        .values
        .last()
        .copied()
        .unwrap_or(0.0);
    if min_eigenvalue < tolerance::MIN_EIGENVALUE {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(())
}

/// Traces out the path (second) qubit of a polarization ⊗ path state.
pub fn partial_trace_path(rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let mut entries = [C64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            entries[2 * a + b] = (0..2).map(|k| m.get(2 * a + k, 2 * b + k)).sum();
        }
    }
    DensityOperator::new(ComplexMatrix::from_row_slice(2, &entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::matrix::{identity2, sigma_y};

    #[test]
    fn right_circular_is_half_identity_minus_sigma_y() {
        let expected = (&identity2() - &sigma_y()).scale(re(0.5));
        assert!(DensityOperator::right_circular().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let not_herm = ComplexMatrix::from_rows2([[re(0.5), c(0.0, 0.1)], [c(0.0, 0.1), re(0.5)]]);
        assert!(matches!(DensityOperator::new(not_herm), Err(Error::NotHermitian { .. })));
        let bad_trace = ComplexMatrix::real2([[0.5, 0.0], [0.0, 0.6]]);
        assert!(matches!(DensityOperator::new(bad_trace), Err(Error::TraceNotOne { .. })));
        let negative = ComplexMatrix::real2([[1.1, 0.0], [0.0, -0.1]]);
        assert!(matches!(DensityOperator::new(negative), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn trace_of_product_state_returns_system() {
        let rho_s = DensityOperator::right_circular();
        let rho_r = DensityOperator::new(ComplexMatrix::real2([[0.3, 0.1], [0.1, 0.7]])).unwrap();
        let joint = rho_s.tensor(&rho_r).unwrap();
        assert!(partial_trace_path(&joint).unwrap().max_abs_diff(&rho_s) < 1e-15);
    }

    #[test]
    fn trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityOperator::pure(&[re(s), re(0.0), re(0.0), re(s)]).unwrap();
        let reduced = partial_trace_path(&bell).unwrap();
        assert!(reduced.max_abs_diff(&DensityOperator::maximally_mixed(Dim::Two)) < 1e-15);
    }

    #[test]
    fn trace_of_optical_map_output_keeps_cos_coherence() {
        // (|H0⟩ − i[cos2θ|V0⟩ + sin2θ|V1⟩])/√2 reduces to off-diagonal (i/2)cos2θ.
        let theta: f64 = 0.3;
        let (s2, c2) = (2.0 * theta).sin_cos();
        let psi = [re(1.0), re(0.0), c(0.0, -c2), c(0.0, -s2)];
        let reduced = partial_trace_path(&DensityOperator::pure(&psi).unwrap()).unwrap();
        assert!((reduced.get(0, 1) - c(0.0, 0.5 * c2)).norm() < 1e-15);
        assert!((reduced.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((reduced.get(1, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_single_qubit() {
        let rho = DensityOperator::right_circular();
        assert!(matches!(
            partial_trace_path(&rho),
            Err(Error::DimensionMismatch { expected: 4, found: 2 })
        ));
    }
}
