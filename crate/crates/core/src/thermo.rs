//! Thermodynamics of the qubit Otto cycle with `H = ħω σ_y`.
//!
//! Energies are in units of ħω₀ and inverse temperatures enter only through
//! the dimensionless `x = ħωβ`. Heat is `tr{H(ρ_end − ρ_start)}`, positive
//! when the working substance gains energy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    identity2, re, relative_entropy, sigma_y, von_neumann_entropy, ComplexMatrix, DensityOperator,
};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    /// Reference angular frequency; energies are reported in units of ħω₀.
    pub omega0: f64,
    /// Gap ratio `ω_fin / ω_ini`.
    pub n: f64,
    /// `ħω₀β_c`.
    pub x_c: f64,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            n: 2.0,
            x_c: 3.0,
        }
    }
}

impl EngineParams {
    pub fn new(omega0: f64, n: f64, x_c: f64) -> Result<Self> {
        let params = Self { omega0, n, x_c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n > 1.0) || !self.n.is_finite() {
            return Err(Error::out_of_range("n", self.n, "n > 1"));
        }
        if !(self.x_c > 0.0) {
            return Err(Error::out_of_range("x_c", self.x_c, "x_c > 0"));
        }
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(Error::out_of_range("omega0", self.omega0, "ω₀ > 0"));
        }
        Ok(())
    }
}

/// `H/ħω₀ = (ω/ω₀) σ_y`.
pub fn hamiltonian(omega_ratio: f64) -> ComplexMatrix {
    sigma_y().scale(re(omega_ratio))
}

/// Gibbs state `½(𝟙 − tanh(x) σ_y)` of `ħωσ_y` at `x = ħωβ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalState {
    rho: DensityOperator,
    x: f64,
}

impl ThermalState {
    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

pub fn thermal_state(x: f64) -> Result<ThermalState> {
    if !(x >= 0.0) {
        return Err(Error::out_of_range("x", x, "x ≥ 0"));
    }
    Ok(ThermalState {
        rho: bloch_y_state(x.tanh())?,
        x,
    })
}

/// `½(𝟙 − t σ_y)` for `|t| ≤ 1`.
pub(crate) fn bloch_y_state(t: f64) -> Result<DensityOperator> {
    DensityOperator::new((&identity2() - &sigma_y().scale(re(t))).scale(re(0.5)))
}

/// Hot-reservoir temperature simulated by a dephasing block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HotReservoir {
    /// `ħω_fin β_h`.
    pub x_h: f64,
    /// `(ω_fin β_h) / (ω_ini β_c) = x_h / x_c`.
    pub r: f64,
}

/// `x_h = artanh(κ · tanh x_c)`.
pub fn hot_x_from_kappa(kappa: f64, params: &EngineParams) -> Result<HotReservoir> {
    check_kappa(kappa)?;
    params.validate()?;
    // κ = 1 leaves the state untouched; skip the tanh/artanh round trip.
    let x_h = if kappa == 1.0 {
        params.x_c
    } else {
        (kappa * params.x_c.tanh()).atanh()
    };
    Ok(HotReservoir {
        x_h,
        r: x_h / params.x_c,
    })
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::out_of_range("kappa", kappa, "0 ≤ κ ≤ 1"));
    }
    Ok(())
}

/// Work and heat of the four strokes, in ħω₀.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Energetics {
    #[serde(rename = "W_AB")]
    pub w_ab: f64,
    #[serde(rename = "Q_BC")]
    pub q_bc: f64,
    #[serde(rename = "W_CD")]
    pub w_cd: f64,
    #[serde(rename = "Q_DA")]
    pub q_da: f64,
}

impl Energetics {
    pub fn du_cycle(&self) -> f64 {
        self.w_ab + self.q_bc + self.w_cd + self.q_da
    }

    /// `|Q_BC| − |Q_DA|`.
    pub fn w_extracted(&self) -> f64 {
        self.q_bc.abs() - self.q_da.abs()
    }

    pub fn values(&self) -> [f64; 4] {
        [self.w_ab, self.q_bc, self.w_cd, self.q_da]
    }

    /// Entrywise absolute differences.
    pub fn delta(&self, other: &Energetics) -> Energetics {
        Energetics {
            w_ab: (self.w_ab - other.w_ab).abs(),
            q_bc: (self.q_bc - other.q_bc).abs(),
            w_cd: (self.w_cd - other.w_cd).abs(),
            q_da: (self.q_da - other.q_da).abs(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values().into_iter().map(f64::abs).fold(0.0, f64::max)
    }
}

/// Stroke energetics from the thermal-state expressions, with
/// `t_c = tanh x_c` and `t_h = κ t_c`.
pub fn closed_form_energetics(kappa: f64, params: &EngineParams) -> Result<Energetics> {
    check_kappa(kappa)?;
    params.validate()?;
    let n = params.n;
    let t_c = params.x_c.tanh();
    let t_h = kappa * t_c;
    Ok(Energetics {
        w_ab: -(n - 1.0) * t_c,
        q_bc: n * (t_c - t_h),
        w_cd: (n - 1.0) * t_h,
        q_da: -(t_c - t_h),
    })
}

/// `tr{ρ_end H_end − ρ_start H_start}` for a unitary stroke.
pub fn work_from_states(
    rho_start: &DensityOperator,
    rho_end: &DensityOperator,
    h_start: &ComplexMatrix,
    h_end: &ComplexMatrix,
) -> Result<f64> {
    Ok(rho_end.expectation(h_end)? - rho_start.expectation(h_start)?)
}

/// `tr{H(ρ_end − ρ_start)}` for a stroke at fixed Hamiltonian.
pub fn heat_from_states(
    rho_start: &DensityOperator,
    rho_end: &DensityOperator,
    h: &ComplexMatrix,
) -> Result<f64> {
    if rho_start.dim() != rho_end.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_start.dim(),
            found: rho_end.dim(),
        });
    }
    Ok(rho_end.expectation(h)? - rho_start.expectation(h)?)
}

/// Irreversible entropy of relaxing `ρ_after_unitary` to a thermal target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyProduction {
    /// `ΔS − βQ`.
    pub balance: f64,
    /// `D(ρ_after_unitary ‖ ρ_target)`.
    pub relative: f64,
}

/// `q` is the heat exchanged during relaxation, in units of ħω where
/// `x = ħωβ`.
pub fn entropy_production(
    rho_after_unitary: &DensityOperator,
    target: &ThermalState,
    x: f64,
    q: f64,
) -> Result<EntropyProduction> {
    let delta_s = von_neumann_entropy(target.rho()) - von_neumann_entropy(rho_after_unitary);
    let relative = relative_entropy(rho_after_unitary, target.rho())?;
    Ok(EntropyProduction {
        balance: delta_s - x * q,
        relative,
    })
}

/// One row of the engine's output: energetics and entropy production of a
/// full cycle at one dephasing setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleLedger {
    pub theta_v_deg: f64,
    /// Radians.
    pub theta_v: f64,
    pub kappa: f64,
    pub r: f64,
    #[serde(flatten)]
    pub energetics: Energetics,
    #[serde(rename = "dU_cycle")]
    pub du_cycle: f64,
    #[serde(rename = "W_extracted")]
    pub w_extracted: f64,
    /// `D(ρ_B ‖ ρ_th^hot)`.
    #[serde(rename = "Sigma_e")]
    pub sigma_e: f64,
    /// `D(ρ_D ‖ ρ_th^cold)`.
    #[serde(rename = "Sigma_c")]
    pub sigma_c: f64,
    #[serde(rename = "Sigma_cycle")]
    pub sigma_cycle: f64,
    /// `ΔS − βQ` of the hot relaxation.
    #[serde(rename = "Sigma_e_balance")]
    pub sigma_e_balance: f64,
    /// `ΔS − βQ` of the cold relaxation.
    #[serde(rename = "Sigma_c_balance")]
    pub sigma_c_balance: f64,
}

impl CycleLedger {
    pub fn new(
        theta_v_deg: f64,
        kappa: f64,
        r: f64,
        energetics: Energetics,
        expansion: EntropyProduction,
        compression: EntropyProduction,
    ) -> Result<Self> {
        for (name, value) in [("Sigma_e", expansion.relative), ("Sigma_c", compression.relative)] {
            if value < tolerance::ENTROPY_PRODUCTION_FLOOR {
                return Err(Error::out_of_range(name, value, "entropy production ≥ 0"));
            }
        }
        Ok(Self {
            theta_v_deg,
            theta_v: theta_v_deg.to_radians(),
            kappa,
            r,
            energetics,
            du_cycle: energetics.du_cycle(),
            w_extracted: energetics.w_extracted(),
            sigma_e: expansion.relative,
            sigma_c: compression.relative,
            sigma_cycle: expansion.relative + compression.relative,
            sigma_e_balance: expansion.balance,
            sigma_c_balance: compression.balance,
        })
    }
}
