//! Entropic and distance measures on density operators. All logs are natural.

use super::matrix::ComplexMatrix;
use super::spectral::eig_herm;
use super::state::DensityOperator;
use crate::error::{Error, Result};
use crate::tolerance;

fn xlnx(x: f64) -> f64 {
    if x < tolerance::EIGENVALUE_CLAMP {
        0.0
    } else {
        x * x.ln()
    }
}

/// `S(ρ) = −Σ λ ln λ`, in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let s: f64 = -rho.eigenvalues().into_iter().map(xlnx).sum::<f64>();
    s.max(0.0)
}

/// `D(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ`, in nats.
///
/// Fails with [`Error::SupportViolation`] when `ρ` carries weight on a
/// direction where `σ` vanishes.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: rho.dim(),
        });
    }
    let eig = sigma.eigen();
    let mut cross = 0.0;
    for (j, &mu) in eig.values.iter().enumerate() {
        let w = eig.vector(j);
        let weight: f64 = (0..w.len())
            .flat_map(|a| (0..w.len()).map(move |b| (a, b)))
            .map(|(a, b)| (w[a].conj() * rho.get(a, b) * w[b]).re)
            .sum();
        if mu < tolerance::SUPPORT_EIGENVALUE {
            if weight > tolerance::SUPPORT_WEIGHT {
                return Err(Error::SupportViolation { weight });
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    if rho.dim() == 2 {
        // Square roots of round-off eigenvalues would leak into the trace
        // for nearly pure states; the qubit closed form avoids them.
        let det = |m: &ComplexMatrix| (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).re.max(0.0);
        let overlap = (rho.matrix() * sigma.matrix()).trace().re;
        let f = overlap + 2.0 * (det(rho.matrix()) * det(sigma.matrix())).sqrt();
        return Ok(f.clamp(0.0, 1.0));
    }
    let clamp = |x: f64| if x > tolerance::EIGENVALUE_CLAMP { x.sqrt() } else { 0.0 };
    let sqrt_rho = rho.eigen().map(clamp);
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let root_trace: f64 = eig_herm(&inner.hermitian_part())?
        .values
        .iter()
        .map(|&x| clamp(x))
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
