use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{re, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance;

/// Eigendecomposition `m = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector for `values[j]`. Each column is scaled
    /// so that its first non-negligible component is real and positive.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, j: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|r| self.vectors.get(r, j)).collect()
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.vectors.as_dmatrix();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| re(f(x))),
        ));
        ComplexMatrix::from_dmatrix(v * diag * v.adjoint()).expect("square by construction")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// Degenerate eigenvalues (closer than [`tolerance::EIGENVALUE_TIE`]) are
/// ordered by the real parts of their phase-fixed eigenvectors, largest first.
pub fn eig_herm(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = m.hermiticity_defect();
    if deviation > tolerance::EIG_INPUT_HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = m.hermitian_part();
    let decomposition = SymmetricEigen::new(sym.as_dmatrix().clone());
    let n = m.dim();

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let col: Vec<C64> = (0..n).map(|r| decomposition.eigenvectors[(r, j)]).collect();
            (decomposition.eigenvalues[j], fix_phase(col))
        })
        .collect();

    pairs.sort_by(|(la, va), (lb, vb)| {
        if (la - lb).abs() > tolerance::EIGENVALUE_TIE {
            lb.partial_cmp(la).unwrap_or(Ordering::Equal)
        } else {
            va.iter()
                .zip(vb)
                .map(|(a, b)| b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        }
    });

    let values = pairs.iter().map(|(l, _)| *l).collect();
    let mut v = DMatrix::zeros(n, n);
    for (j, (_, col)) in pairs.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            v[(r, j)] = *z;
        }
    }
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_dmatrix(v)?,
    })
}

fn fix_phase(mut col: Vec<C64>) -> Vec<C64> {
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if let Some(pivot) = col.iter().find(|z| z.norm() > tolerance::PHASE_PIVOT).copied() {
        let phase = pivot.conj() / pivot.norm();
        for z in &mut col {
            *z = *z * phase / norm;
        }
        // The pivot is real by construction; drop rounding residue.
        if let Some(p) = col.iter_mut().find(|z| z.norm() > tolerance::PHASE_PIVOT) {
            p.im = 0.0;
        }
    }
    col
}
