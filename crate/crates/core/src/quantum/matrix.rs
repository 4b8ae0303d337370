use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Hilbert-space dimension of an operator: one qubit or two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Four,
}

impl Dim {
    pub fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }

    pub fn from_size(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

/// Dense complex square matrix of dimension 2 or 4.
///
/// Two-qubit operators use the ordering polarization ⊗ path, so the
/// basis index of `|p⟩_S|k⟩_R` is `2p + k`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        let dim = Dim::from_size(dim)?.size();
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        Self {
            inner: DMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]]),
        }
    }

    pub fn real2(rows: [[f64; 2]; 2]) -> Self {
        Self::from_rows2([
            [re(rows[0][0]), re(rows[0][1])],
            [re(rows[1][0]), re(rows[1][1])],
        ])
    }

    pub fn identity(dim: Dim) -> Self {
        Self {
            inner: DMatrix::identity(dim.size(), dim.size()),
        }
    }

    pub fn zeros(dim: Dim) -> Self {
        Self {
            inner: DMatrix::zeros(dim.size(), dim.size()),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        let dim = Dim::from_size(entries.len())?.size();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(Self { inner: m })
    }

    /// Projector `|ψ⟩⟨ψ|` onto the normalized vector `ψ`.
    pub fn projector(psi: &[C64]) -> Result<Self> {
        let dim = Dim::from_size(psi.len())?.size();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::out_of_range("vector norm", norm, "finite and nonzero"));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj() / (norm * norm);
            }
        }
        Ok(Self { inner: m })
    }

    pub(crate) fn from_dmatrix(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::DimensionMismatch {
                expected: inner.nrows(),
                found: inner.ncols(),
            });
        }
        Dim::from_size(inner.nrows())?;
        Ok(Self { inner })
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| self.inner[(r, c)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    /// `self · m · self†`
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<Self> {
        self.check_same_dim(m)?;
        Ok(Self {
            inner: &self.inner * &m.inner * self.inner.adjoint(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Self::identity(Dim::from_size(self.dim()).expect("validated dim")))
    }

    pub fn hermitian_part(&self) -> Self {
        Self {
            inner: (&self.inner + self.inner.adjoint()) * re(0.5),
        }
    }

    /// Kronecker product; both factors must be 2×2.
    pub fn kron(&self, other: &ComplexMatrix) -> Result<Self> {
        for m in [self, other] {
            if m.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: m.dim(),
                });
            }
        }
        Ok(Self {
            inner: self.inner.kronecker(&other.inner),
        })
    }

    pub(crate) fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let rows: Vec<Vec<C64>> = (0..n)
            .map(|r| (0..n).map(|c| self.inner[(r, c)]).collect())
            .collect();
        f.debug_struct("ComplexMatrix").field("rows", &rows).finish()
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for r in 0..n {
            for c in 0..n {
                let z = self.inner[(r, c)];
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch, like the underlying matrix product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

/// Serialized as a list of rows, each entry a `[re, im]` pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let z = self.inner[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix rows must be square"));
        }
        let entries: Vec<C64> = rows.iter().flatten().map(|&[a, b]| c(a, b)).collect();
        ComplexMatrix::from_row_slice(n, &entries).map_err(serde::de::Error::custom)
    }
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(Dim::Two)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::real2([[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::real2([[1.0, 0.0], [0.0, -1.0]])
}

/// Kronecker product of two single-qubit operators, polarization first.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_tensor_identity_is_identity4() {
        let id4 = tensor(&identity2(), &identity2()).unwrap();
        assert_eq!(id4, ComplexMatrix::identity(Dim::Four));
    }

    #[test]
    fn tensor_of_projectors_hits_single_index() {
        // |0⟩⟨0|_S ⊗ |1⟩⟨1|_R lives at basis index 2·0 + 1 = 1.
        let p0 = ComplexMatrix::real2([[1.0, 0.0], [0.0, 0.0]]);
        let p1 = ComplexMatrix::real2([[0.0, 0.0], [0.0, 1.0]]);
        let m = tensor(&p0, &p1).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if (r, col) == (1, 1) { ONE } else { ZERO };
                assert_eq!(m.get(r, col), expected, "entry ({r},{col})");
            }
        }
    }

    #[test]
    fn sigma_y_tensor_identity_block_structure() {
        // (σ_y ⊗ 𝟙)|V⟩|k⟩ = -i|H⟩|k⟩, (σ_y ⊗ 𝟙)|H⟩|k⟩ = i|V⟩|k⟩
        let m = tensor(&sigma_y(), &identity2()).unwrap();
        for k in 0..2 {
            assert_eq!(m.get(k, 2 + k), -I);
            assert_eq!(m.get(2 + k, k), I);
            assert_eq!(m.get(k, k), ZERO);
            assert_eq!(m.get(k, 2 + (1 - k)), ZERO);
        }
    }

    #[test]
    fn tensor_rejects_non_qubit_factor() {
        let id4 = ComplexMatrix::identity(Dim::Four);
        assert!(matches!(
            tensor(&id4, &identity2()),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
    }

    #[test]
    fn from_row_slice_checks_shape() {
        assert!(matches!(
            ComplexMatrix::from_row_slice(3, &[ZERO; 9]),
            Err(Error::UnsupportedDimension(3))
        ));
        assert!(matches!(
            ComplexMatrix::from_row_slice(2, &[ZERO; 3]),
            Err(Error::EntryCount { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn json_entries_are_re_im_pairs() {
        let json = serde_json::to_string(&sigma_y()).unwrap();
        assert_eq!(json, "[[[0.0,0.0],[-0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sigma_y());
    }
}
