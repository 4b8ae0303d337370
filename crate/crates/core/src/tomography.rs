//! Three-basis polarization tomography: simulated detector intensities,
//! Stokes parameters, and density-matrix reconstruction.
//!
//! Every Stokes parameter is `P_α − P_β` of its basis record:
//! `s1 = P_D − P_AD`, `s2 = P_L − P_R`, `s3 = P_H − P_V`. With `σ₂ = σ_y`
//! this makes `|L⟩ = (|H⟩ + i|V⟩)/√2` and `|R⟩ = (|H⟩ − i|V⟩)/√2`, the
//! right-circular input state of the engine.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    c, identity2, re, sigma_x, sigma_y, sigma_z, ComplexMatrix, DensityOperator, C64, ONE, ZERO,
};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    HV,
    DAD,
    RL,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::HV, Basis::DAD, Basis::RL];

    /// `(α, β)` port states. The circular record lists `L` as its α port.
    pub fn ports(self) -> ([C64; 2], [C64; 2]) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Basis::HV => ([ONE, ZERO], [ZERO, ONE]),
            Basis::DAD => ([re(s), re(s)], [re(s), re(-s)]),
            Basis::RL => ([re(s), c(0.0, s)], [re(s), c(0.0, -s)]),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::HV => "HV",
            Basis::DAD => "DAD",
            Basis::RL => "RL",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HV" => Ok(Basis::HV),
            "DAD" => Ok(Basis::DAD),
            "RL" => Ok(Basis::RL),
            other => Err(Error::Tomography(format!(
                "unknown basis `{other}` (expected HV, DAD or RL)"
            ))),
        }
    }
}

/// Intensities on the two output ports of one projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityRecord {
    pub basis: Basis,
    pub i_alpha: f64,
    pub i_beta: f64,
}

impl IntensityRecord {
    pub fn new(basis: Basis, i_alpha: f64, i_beta: f64) -> Result<Self> {
        if !(i_alpha >= 0.0 && i_beta >= 0.0) || !i_alpha.is_finite() || !i_beta.is_finite() {
            return Err(Error::Tomography(format!(
                "{basis} intensities must be finite and nonnegative, got {i_alpha} and {i_beta}"
            )));
        }
        if i_alpha + i_beta <= 0.0 {
            return Err(Error::Tomography(format!("{basis} record has zero total intensity")));
        }
        Ok(Self {
            basis,
            i_alpha,
            i_beta,
        })
    }

    /// `P_α = I_α / (I_α + I_β)`.
    pub fn p_alpha(&self) -> f64 {
        self.i_alpha / (self.i_alpha + self.i_beta)
    }

    pub fn p_beta(&self) -> f64 {
        self.i_beta / (self.i_alpha + self.i_beta)
    }
}

fn port_probability(rho: &DensityOperator, ket: &[C64; 2]) -> f64 {
    let mut p = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            p += (ket[a].conj() * rho.get(a, b) * ket[b]).re;
        }
    }
    p.clamp(0.0, 1.0)
}

/// Simulated intensities with multiplicative Gaussian noise of relative
/// standard deviation `noise_sigma`, clamped at zero.
pub fn measure<R: Rng + ?Sized>(
    rho: &DensityOperator,
    basis: Basis,
    noise_sigma: f64,
    rng: &mut R,
) -> Result<IntensityRecord> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    if !(noise_sigma >= 0.0) {
        return Err(Error::out_of_range("noise_sigma", noise_sigma, "σ ≥ 0"));
    }
    let (alpha, beta) = basis.ports();
    let p_alpha = port_probability(rho, &alpha);
    let p_beta = port_probability(rho, &beta);
    if noise_sigma == 0.0 {
        return IntensityRecord::new(basis, p_alpha, p_beta);
    }
    loop {
        let mut noisy = |p: f64| {
            let z: f64 = StandardNormal.sample(rng);
            (p * (1.0 + noise_sigma * z)).max(0.0)
        };
        let (i_alpha, i_beta) = (noisy(p_alpha), noisy(p_beta));
        if i_alpha + i_beta > 0.0 {
            return IntensityRecord::new(basis, i_alpha, i_beta);
        }
    }
}

/// A seeded measurement session; owns the noise generator.
#[derive(Clone, Debug)]
pub struct MeasurementSession {
    seed: u64,
    noise_sigma: f64,
    rng: ChaCha8Rng,
}

impl MeasurementSession {
    pub fn new(noise_sigma: f64, seed: u64) -> Self {
        Self {
            seed,
            noise_sigma,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn measure(&mut self, rho: &DensityOperator, basis: Basis) -> Result<IntensityRecord> {
        measure(rho, basis, self.noise_sigma, &mut self.rng)
    }

    /// One record per basis, in `HV, DAD, RL` order.
    pub fn measure_all(&mut self, rho: &DensityOperator) -> Result<[IntensityRecord; 3]> {
        Ok([
            self.measure(rho, Basis::HV)?,
            self.measure(rho, Basis::DAD)?,
            self.measure(rho, Basis::RL)?,
        ])
    }

    /// Measures all three bases and reconstructs the state.
    pub fn tomograph(&mut self, rho: &DensityOperator) -> Result<Reconstruction> {
        let records = self.measure_all(rho)?;
        reconstruct(&stokes_from_intensities(&records)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    /// `|(s1, s2, s3)| / s0`.
    pub fn degree_of_polarization(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt() / self.s0
    }

    pub fn is_physical(&self) -> bool {
        let d = self.degree_of_polarization();
        d * d <= 1.0 + tolerance::STOKES_PHYSICAL
    }
}

/// `s_i = tr{σ_i ρ}`.
pub fn stokes_of(rho: &DensityOperator) -> Result<StokesVector> {
    Ok(StokesVector {
        s0: rho.expectation(&identity2())?,
        s1: rho.expectation(&sigma_x())?,
        s2: rho.expectation(&sigma_y())?,
        s3: rho.expectation(&sigma_z())?,
    })
}

/// Stokes parameters from one intensity record per basis.
pub fn stokes_from_intensities(records: &[IntensityRecord]) -> Result<StokesVector> {
    let find = |basis: Basis| -> Result<&IntensityRecord> {
        let mut matching = records.iter().filter(|r| r.basis == basis);
        match (matching.next(), matching.next()) {
            (Some(r), None) => Ok(r),
            (None, _) => Err(Error::Tomography(format!("missing {basis} record"))),
            (Some(_), Some(_)) => Err(Error::Tomography(format!("duplicate {basis} record"))),
        }
    };
    let hv = find(Basis::HV)?;
    let dad = find(Basis::DAD)?;
    let rl = find(Basis::RL)?;
    for r in [hv, dad, rl] {
        // Records built by hand may bypass the constructor.
        IntensityRecord::new(r.basis, r.i_alpha, r.i_beta)?;
    }
    Ok(StokesVector {
        s0: hv.p_alpha() + hv.p_beta(),
        s1: dad.p_alpha() - dad.p_beta(),
        s2: rl.p_alpha() - rl.p_beta(),
        s3: hv.p_alpha() - hv.p_beta(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub rho: DensityOperator,
    /// Set when the Stokes vector lay outside the Bloch ball and was pulled
    /// back radially onto its surface.
    pub projected: bool,
    /// Degree of polarization before projection.
    pub degree_of_polarization: f64,
}

/// `ρ = ½(s0·𝟙 + Σ s_i σ_i)` after normalizing `s0` to 1.
pub fn reconstruct(s: &StokesVector) -> Result<Reconstruction> {
    let finite = [s.s0, s.s1, s.s2, s.s3].iter().all(|v| v.is_finite());
    if !finite || !(s.s0 > 0.0) {
        return Err(Error::Tomography(format!("invalid Stokes vector {s:?}")));
    }
    let (mut x, mut y, mut z) = (s.s1 / s.s0, s.s2 / s.s0, s.s3 / s.s0);
    let degree = (x * x + y * y + z * z).sqrt();
    let projected = !s.is_physical();
    if projected {
        log::warn!("unphysical Stokes vector (degree {degree:.6}); projecting onto the Bloch sphere");
        x /= degree;
        y /= degree;
        z /= degree;
    }
    let m = ComplexMatrix::from_rows2([[re(1.0 + z), c(x, -y)], [c(x, y), re(1.0 - z)]]).scale(re(0.5));
    Ok(Reconstruction {
        rho: DensityOperator::new(m)?,
        projected,
        degree_of_polarization: degree,
    })
}

/// Parses `basis i_alpha i_beta` lines; `#` starts a comment.
pub fn parse_intensity_file(text: &str) -> Result<Vec<IntensityRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::Tomography(format!("line {}: {msg}", idx + 1));
        if fields.len() != 3 {
            return Err(err(format!("expected `basis i_alpha i_beta`, got `{line}`")));
        }
        let basis: Basis = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(format!("`{s}` is not a number")))
        };
        let record = IntensityRecord::new(basis, num(fields[1])?, num(fields[2])?)
            .map_err(|e| err(e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

const PUBLISHED: &str = include_str!("../data/published_cycle.v1.txt");

/// Corrections applied to a published matrix to make it a density operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adjustment {
    pub hermiticity_defect: f64,
    pub raw_trace: f64,
    /// Smallest eigenvalue after Hermitizing and trace normalization.
    pub min_eigenvalue: f64,
    /// Negative eigenvalues were clipped.
    pub clipped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenMatrix {
    pub label: String,
    /// Entries as printed.
    pub published: ComplexMatrix,
    pub rho: DensityOperator,
    pub adjustment: Adjustment,
}

/// Labels in cycle order.
pub const GOLDEN_LABELS: [&str; 5] = ["ini", "AB", "BC", "CD", "DA"];

/// The bundled measured density matrices at θ_V = 22.5°.
pub fn load_published() -> Result<Vec<GoldenMatrix>> {
    parse_golden(PUBLISHED)
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenMatrix>> {
    let mut entries: Vec<(String, [Option<C64>; 4])> = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let corrupt = |message: String| Error::GoldenData {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !saw_header {
            if fields != ["otto-golden", "1"] {
                return Err(corrupt(format!("expected header `otto-golden 1`, got `{line}`")));
            }
            saw_header = true;
            continue;
        }
        let [label, row, col, re_s, im_s] = fields.as_slice() else {
            return Err(corrupt(format!("expected `label row col re im`, got `{line}`")));
        };
        let index = |s: &str| match s {
            "0" => Ok(0usize),
            "1" => Ok(1usize),
            other => Err(corrupt(format!("index `{other}` out of range"))),
        };
        let value = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| corrupt(format!("`{s}` is not a finite number")))
        };
        let slot = 2 * index(row)? + index(col)?;
        let z = c(value(re_s)?, value(im_s)?);
        let pos = match entries.iter().position(|(l, _)| l == label) {
            Some(p) => p,
            None => {
                entries.push((label.to_string(), [None; 4]));
                entries.len() - 1
            }
        };
        if entries[pos].1[slot].replace(z).is_some() {
            return Err(corrupt(format!("duplicate entry for {label}")));
        }
    }
    if !saw_header {
        return Err(Error::GoldenData {
            line: 0,
            message: "empty golden file".into(),
        });
    }
    let mut out = Vec::with_capacity(entries.len());
    for (label, slots) in entries {
        let values: Option<Vec<C64>> = slots.iter().copied().collect();
        let values = values.ok_or_else(|| Error::GoldenData {
            line: 0,
            message: format!("matrix {label} is incomplete"),
        })?;
        let published = ComplexMatrix::from_row_slice(2, &values)?;
        out.push(sanitize(label, published)?);
    }
    Ok(out)
}

fn sanitize(label: String, published: ComplexMatrix) -> Result<GoldenMatrix> {
    let hermiticity_defect = published.hermiticity_defect();
    let raw_trace = published.trace().re;
    if !(raw_trace > 0.0) {
        return Err(Error::GoldenData {
            line: 0,
            message: format!("matrix {label} has nonpositive trace"),
        });
    }
    let normalized = published.hermitian_part().scale(re(1.0 / raw_trace));
    let eig = crate::quantum::eig_herm(&normalized)?;
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    let clipped = min_eigenvalue < 0.0;
    let matrix = if clipped {
        let kept: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
        eig.map(|v| v.max(0.0) / kept)
    } else {
        normalized
    };
    let adjustment = Adjustment {
        hermiticity_defect,
        raw_trace,
        min_eigenvalue,
        clipped,
    };
    log::info!("golden {label}: {adjustment:?}");
    Ok(GoldenMatrix {
        rho: DensityOperator::new(matrix)?.with_label(label.clone()),
        label,
        published,
        adjustment,
    })
}
