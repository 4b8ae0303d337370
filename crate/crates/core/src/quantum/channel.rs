use super::matrix::{ComplexMatrix, Dim};
use super::state::DensityOperator;
use crate::error::{Error, Result};
use crate::tolerance;

/// Kraus representation `ρ ↦ Σ K ρ K†` of a trace-preserving channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyKraus)?;
        let dim = Dim::from_size(first.dim())?;
        for k in &operators {
            first.check_same_dim(k)?;
        }
        let sum = operators
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &(&k.adjoint() * k));
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > tolerance::KRAUS_COMPLETENESS {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(Self { operators })
    }

    pub fn identity(dim: Dim) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }
}

/// `ρ' = Σ K ρ K†`.
pub fn apply_kraus(rho: &DensityOperator, kraus: &KrausSet) -> Result<DensityOperator> {
    if rho.dim() != kraus.dim() {
        return Err(Error::DimensionMismatch {
            expected: kraus.dim(),
            found: rho.dim(),
        });
    }
    let dim = Dim::from_size(rho.dim())?;
    let out = kraus
        .operators()
        .iter()
        .try_fold(ComplexMatrix::zeros(dim), |acc, k| {
            k.conjugate(rho.matrix()).map(|term| &acc + &term)
        })?;
    DensityOperator::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phase_damping(p: f64) -> KrausSet {
        let k0 = ComplexMatrix::real2([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]);
        let k1 = ComplexMatrix::real2([[0.0, 0.0], [0.0, p.sqrt()]]);
        KrausSet::new(vec![k0, k1]).unwrap()
    }

    #[test]
    fn identity_channel_leaves_state() {
        let rho = DensityOperator::right_circular();
        let out = apply_kraus(&rho, &KrausSet::identity(Dim::Two)).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn full_dephasing_kills_coherence() {
        let out = apply_kraus(&DensityOperator::right_circular(), &phase_damping(1.0)).unwrap();
        assert!(out.max_abs_diff(&DensityOperator::maximally_mixed(Dim::Two)) < 1e-15);
    }

    #[test]
    fn half_dephasing_at_45_degrees() {
        let c45 = std::f64::consts::FRAC_PI_4.cos();
        let out = apply_kraus(&DensityOperator::right_circular(), &phase_damping(1.0 - c45 * c45)).unwrap();
        assert!((out.get(0, 1).norm() - 0.353_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn incomplete_set_is_rejected() {
        let k0 = ComplexMatrix::real2([[1.0, 0.0], [0.0, 0.5]]);
        assert!(matches!(
            KrausSet::new(vec![k0]),
            Err(Error::IncompleteKraus { .. })
        ));
        assert!(matches!(KrausSet::new(vec![]), Err(Error::EmptyKraus)));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let rho = DensityOperator::maximally_mixed(Dim::Four);
        let err = apply_kraus(&rho, &KrausSet::identity(Dim::Two)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }
}
