//! Jones matrices of the optical elements and the composite channel blocks
//! of the engine: phase damping (PD), its inverse (I-PD), and the wave-plate
//! pairs that realize gap expansion and compression.
//!
//! Joint operators act on polarization ⊗ path with `|H⟩ ≡ |0⟩_S`,
//! `|V⟩ ≡ |1⟩_S` and the two propagation directions as `|0⟩_R`, `|1⟩_R`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::quantum::{
    apply_kraus, c, partial_trace_path, re, ComplexMatrix, DensityOperator, Dim, KrausSet, ZERO,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Hwp,
    Qwp,
    Pbs,
    Phase,
    Rot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Polarization,
    Path,
    Joint,
}

/// A lossless optical element and its exact Jones (or joint) matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OpticalElement {
    kind: ElementKind,
    angle: f64,
    target: Target,
    matrix: ComplexMatrix,
}

impl OpticalElement {
    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    /// Plate angle, rotation angle or phase, in radians.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The element acting on the polarization of both paths (`M ⊗ 𝟙`).
    pub fn on_both_paths(&self) -> Result<ComplexMatrix> {
        match self.target {
            Target::Polarization => self.matrix.kron(&ComplexMatrix::identity(Dim::Two)),
            _ => Ok(self.matrix.clone()),
        }
    }
}

/// Half-wave plate `[[cos θ, sin θ], [sin θ, −cos θ]]`.
///
/// The argument enters the matrix directly, so two plates compose as
/// `hwp(a)·hwp(b) = rotation(a − b)`; a plate whose fast axis sits at angle
/// `φ` from horizontal is `hwp(2φ)`.
pub fn hwp(theta: f64) -> OpticalElement {
    let (s, co) = theta.sin_cos();
    OpticalElement {
        kind: ElementKind::Hwp,
        angle: theta,
        target: Target::Polarization,
        matrix: ComplexMatrix::real2([[co, s], [s, -co]]),
    }
}

/// Polarization rotation `S(α) = [[cos α, −sin α], [sin α, cos α]] = exp(−iασ_y)`.
pub fn rotation(alpha: f64) -> OpticalElement {
    let (s, co) = alpha.sin_cos();
    OpticalElement {
        kind: ElementKind::Rot,
        angle: alpha,
        target: Target::Polarization,
        matrix: ComplexMatrix::real2([[co, -s], [s, co]]),
    }
}

/// Quarter-wave plate with fast axis at `theta` from horizontal:
/// `R(θ) diag(1, i) R(−θ)`.
pub fn qwp(theta: f64) -> OpticalElement {
    let (s, co) = theta.sin_cos();
    let r = ComplexMatrix::real2([[co, -s], [s, co]]);
    let retarder = ComplexMatrix::from_rows2([[re(1.0), ZERO], [ZERO, c(0.0, 1.0)]]);
    OpticalElement {
        kind: ElementKind::Qwp,
        angle: theta,
        target: Target::Polarization,
        matrix: &(&r * &retarder) * &r.adjoint(),
    }
}

/// Polarizing beam splitter: `|H,k⟩ → |H,k⟩`, `|V,k⟩ → |V,1−k⟩`.
pub fn pbs() -> OpticalElement {
    let one = re(1.0);
    let mut entries = [ZERO; 16];
    for (from, to) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        entries[to * 4 + from] = one;
    }
    OpticalElement {
        kind: ElementKind::Pbs,
        angle: 0.0,
        target: Target::Joint,
        matrix: ComplexMatrix::from_row_slice(4, &entries).expect("4x4"),
    }
}

/// Piezo-driven phase `e^{iφ}` on path `|1⟩_R`.
pub fn phase(phi: f64) -> OpticalElement {
    let p = c(phi.cos(), phi.sin());
    OpticalElement {
        kind: ElementKind::Phase,
        angle: phi,
        target: Target::Path,
        matrix: ComplexMatrix::diagonal(&[re(1.0), p, re(1.0), p]).expect("4 entries"),
    }
}

/// Joint operator applying `on_path0` to polarization in path 0 and
/// `on_path1` in path 1.
pub fn per_path(on_path0: &ComplexMatrix, on_path1: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p0 = ComplexMatrix::real2([[1.0, 0.0], [0.0, 0.0]]);
    let p1 = ComplexMatrix::real2([[0.0, 0.0], [0.0, 1.0]]);
    Ok(&on_path0.kron(&p0)? + &on_path1.kron(&p1)?)
}

/// Jones angle of the linear gap ramp from `ω₀` to `nω₀` (or back) over `τ`:
/// `α = (n + 1) ω₀τ / 2`.
pub fn jones_angle(n: f64, omega0_tau: f64) -> Result<f64> {
    if !(n > 1.0) || !n.is_finite() {
        return Err(Error::out_of_range("n", n, "n > 1"));
    }
    if !(omega0_tau > 0.0) || !omega0_tau.is_finite() {
        return Err(Error::out_of_range("omega0_tau", omega0_tau, "ω₀τ > 0"));
    }
    Ok((n + 1.0) * omega0_tau / 2.0)
}

/// Two half-wave plates at arguments `α` then `2α`, realizing `S(α)`.
pub fn jones_pair(alpha: f64) -> (OpticalElement, OpticalElement) {
    (hwp(alpha), hwp(2.0 * alpha))
}

fn compiled_rotation(alpha: f64) -> OpticalElement {
    let (first, second) = jones_pair(alpha);
    OpticalElement {
        kind: ElementKind::Rot,
        angle: alpha,
        target: Target::Polarization,
        matrix: second.matrix() * first.matrix(),
    }
}

/// Gap-expansion unitary `S(α_e)`, compiled from a wave-plate pair with
/// relative angle `α_e`.
pub fn expansion_unitary(n: f64, omega0_tau: f64) -> Result<OpticalElement> {
    Ok(compiled_rotation(jones_angle(n, omega0_tau)?))
}

/// Gap-compression unitary; the linear ramp back down has the same Jones
/// angle as the expansion.
pub fn compression_unitary(n: f64, omega0_tau: f64) -> Result<OpticalElement> {
    Ok(compiled_rotation(jones_angle(n, omega0_tau)?))
}

/// Coherence multiplier `κ = cos 2θ_v` of the PD block.
pub fn kappa(theta_v: f64) -> f64 {
    // sin(π/2 − 2θ) lands exactly on 0 and 1 at the range endpoints.
    (FRAC_PI_2 - 2.0 * theta_v).sin()
}

/// `κ` for a plate angle given in degrees, exact at 0° and 45°.
pub fn kappa_degrees(theta_deg: f64) -> f64 {
    (90.0 - 2.0 * theta_deg).to_radians().sin()
}

fn check_theta_v(theta_v: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_4).contains(&theta_v) {
        return Err(Error::out_of_range("theta_v", theta_v, "0 ≤ θ_v ≤ π/4"));
    }
    Ok(())
}

/// How a [`ChannelBlock`] is realized.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilation {
    /// Joint polarization ⊗ path unitary.
    pub unitary: ComplexMatrix,
    /// Whether the path is traced out after the unitary.
    pub trace_path: bool,
}

/// A composite channel with a dilated and/or a Kraus realization.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelBlock {
    name: String,
    dilation: Option<Dilation>,
    kraus: Option<KrausSet>,
}

impl ChannelBlock {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dilation(&self) -> Option<&Dilation> {
        self.dilation.as_ref()
    }

    pub fn kraus(&self) -> Option<&KrausSet> {
        self.kraus.as_ref()
    }

    /// Applies the block's joint unitary to a two-qubit state, without tracing.
    pub fn apply_joint(&self, joint: &DensityOperator) -> Result<DensityOperator> {
        let dilation = self.require_dilation()?;
        joint.evolve(&dilation.unitary)
    }

    /// Attaches the path ancilla in `|0⟩_R`, applies the joint unitary and
    /// traces the path out.
    pub fn apply_dilated(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let joint = rho.tensor(&ancilla())?;
        partial_trace_path(&self.apply_joint(&joint)?)
    }

    pub fn apply_kraus(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let kraus = self.kraus.as_ref().ok_or_else(|| Error::MissingRealization {
            block: self.name.clone(),
            realization: "Kraus",
        })?;
        apply_kraus(rho, kraus)
    }

    fn require_dilation(&self) -> Result<&Dilation> {
        self.dilation.as_ref().ok_or_else(|| Error::MissingRealization {
            block: self.name.clone(),
            realization: "dilated",
        })
    }
}

/// Path ancilla `|0⟩⟨0|_R`.
pub fn ancilla() -> DensityOperator {
    DensityOperator::pure(&[re(1.0), ZERO]).expect("normalized")
}

/// Plate settings of the PD interferometer. Each plate's matrix argument is
/// fixed by the action it must have on its arm: HWP4 leaves `|H⟩` alone,
/// HWP3 sends `|V⟩ → sin 2θ_v|H⟩ + cos 2θ_v|V⟩`, HWP5 sends `|H⟩ → |V⟩`.
fn pd_plates(theta_v: f64) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let hwp4 = hwp(0.0).matrix().clone();
    let hwp3 = hwp(PI - 2.0 * theta_v).matrix().clone();
    let hwp5 = hwp(FRAC_PI_2).matrix().clone();
    (hwp4, hwp3, hwp5)
}

fn pd_unitary(theta_v: f64, pzt_phase: f64) -> Result<ComplexMatrix> {
    let (hwp4, hwp3, hwp5) = pd_plates(theta_v);
    let id = ComplexMatrix::identity(Dim::Two);
    let split = pbs();
    let arms = per_path(&hwp4, &hwp3)?;
    let last = per_path(&id, &hwp5)?;
    // PBS1 → HWP4 | HWP3 → PZT → PBS2 → HWP5 on path 1
    Ok(&(&(&(&last * split.matrix()) * phase(pzt_phase).matrix()) * &arms) * split.matrix())
}

fn pd_kraus(theta_v: f64, pzt_phase: f64) -> Result<KrausSet> {
    let (s2, c2) = (2.0 * theta_v).sin_cos();
    let p = c(pzt_phase.cos(), pzt_phase.sin());
    let k0 = ComplexMatrix::from_rows2([[re(1.0), ZERO], [ZERO, p * c2]]);
    let k1 = ComplexMatrix::from_rows2([[ZERO, ZERO], [ZERO, p * s2]]);
    KrausSet::new(vec![k0, k1])
}

/// Phase-damping block with coherence multiplier `cos 2θ_v`.
pub fn pd_block(theta_v: f64) -> Result<ChannelBlock> {
    pd_block_with_phase(theta_v, 0.0)
}

/// PD block with an explicit PZT phase on the reflected arm.
pub fn pd_block_with_phase(theta_v: f64, pzt_phase: f64) -> Result<ChannelBlock> {
    check_theta_v(theta_v)?;
    Ok(ChannelBlock {
        name: "PD".into(),
        dilation: Some(Dilation {
            unitary: pd_unitary(theta_v, pzt_phase)?,
            trace_path: true,
        }),
        kraus: Some(pd_kraus(theta_v, pzt_phase)?),
    })
}

/// PZT2 phase that makes the I-PD interferometer undo a PD block run at
/// `pd_phase`.
pub fn restoring_phase(pd_phase: f64) -> f64 {
    -pd_phase
}

/// Inverted PD: HWP10 at the HWP5 setting, PBS3, PZT2, HWP11/HWP12 at the
/// HWP3/HWP4 settings, PBS4. Consumes the path ancilla written by PD.
pub fn ipd_block(theta_v: f64) -> Result<ChannelBlock> {
    ipd_block_with_phase(theta_v, restoring_phase(0.0))
}

pub fn ipd_block_with_phase(theta_v: f64, pzt2_phase: f64) -> Result<ChannelBlock> {
    check_theta_v(theta_v)?;
    let (hwp12, hwp11, hwp10) = pd_plates(theta_v);
    let id = ComplexMatrix::identity(Dim::Two);
    let split = pbs();
    let first = per_path(&id, &hwp10)?;
    let arms = per_path(&hwp12, &hwp11)?;
    let unitary = &(&(&(split.matrix() * &arms) * phase(pzt2_phase).matrix()) * split.matrix()) * &first;
    Ok(ChannelBlock {
        name: "I-PD".into(),
        dilation: Some(Dilation {
            unitary,
            trace_path: true,
        }),
        kraus: None,
    })
}
