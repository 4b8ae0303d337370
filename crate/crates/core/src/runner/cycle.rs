use serde::{Deserialize, Serialize};

use super::{DaStroke, Stroke, SweepConfig};
use crate::error::{Error, Result};
use crate::optics::{self, kappa_degrees};
use crate::quantum::{partial_trace_path, DensityOperator};
use crate::thermo::{
    closed_form_energetics, entropy_production, hamiltonian, heat_from_states, hot_x_from_kappa,
    thermal_state, work_from_states, CycleLedger, Energetics, HotReservoir,
};
use crate::tolerance;
use crate::tomography::MeasurementSession;

/// Polarization states at the stroke boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrokeStates {
    pub ta: DensityOperator,
    pub tb: DensityOperator,
    pub tc: DensityOperator,
    pub td: DensityOperator,
    pub ta2: DensityOperator,
}

impl StrokeStates {
    pub const LABELS: [&'static str; 5] = ["TA", "TB", "TC", "TD", "TA2"];

    pub fn states(&self) -> [&DensityOperator; 5] {
        [&self.ta, &self.tb, &self.tc, &self.td, &self.ta2]
    }

    /// Copies of the states carrying their tap labels.
    pub fn labeled(&self) -> Vec<DensityOperator> {
        self.states()
            .into_iter()
            .zip(Self::LABELS)
            .map(|(s, l)| s.clone().with_label(l))
            .collect()
    }

    fn try_map(&self, mut f: impl FnMut(&DensityOperator) -> Result<DensityOperator>) -> Result<Self> {
        Ok(Self {
            ta: f(&self.ta)?,
            tb: f(&self.tb)?,
            tc: f(&self.tc)?,
            td: f(&self.td)?,
            ta2: f(&self.ta2)?,
        })
    }
}

fn in_stroke<T>(stroke: Stroke, result: Result<T>) -> Result<T> {
    result.map_err(|source| Error::Stroke {
        stroke,
        source: Box::new(source),
    })
}

/// Pushes `initial` through the four strokes of the optical circuit.
pub fn simulate_strokes(
    initial: &DensityOperator,
    theta_v_deg: f64,
    config: &SweepConfig,
) -> Result<StrokeStates> {
    let theta_v = theta_v_deg.to_radians();
    let tb = in_stroke(Stroke::Expansion, (|| {
        let u = optics::expansion_unitary(config.n, config.omega0_tau)?;
        initial.evolve(u.matrix())
    })())?;
    let joint_c = in_stroke(Stroke::HotThermalization, (|| {
        optics::pd_block(theta_v)?.apply_joint(&tb.tensor(&optics::ancilla())?)
    })())?;
    let tc = in_stroke(Stroke::HotThermalization, partial_trace_path(&joint_c))?;
    let joint_d = in_stroke(Stroke::Compression, (|| {
        let u = optics::compression_unitary(config.n, config.omega0_tau)?;
        joint_c.evolve(&u.on_both_paths()?)
    })())?;
    let td = in_stroke(Stroke::Compression, partial_trace_path(&joint_d))?;
    let ta2 = in_stroke(Stroke::ColdThermalization, (|| match config.da_stroke {
        DaStroke::Ipd => partial_trace_path(&optics::ipd_block(theta_v)?.apply_joint(&joint_d)?),
        DaStroke::Replace => Ok(thermal_state(config.x_c)?.rho().clone()),
    })())?;
    Ok(StrokeStates {
        ta: initial.clone(),
        tb,
        tc,
        td,
        ta2,
    })
}

/// One full cycle at one dephasing setting.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleRun {
    pub ledger: CycleLedger,
    pub hot: HotReservoir,
    pub closed_form: Energetics,
    pub max_delta_vs_closed_form: f64,
    /// States the energetics were computed from: simulated, or
    /// reconstructed from noisy tomography.
    pub snapshots: StrokeStates,
}

fn spectrum_drift(a: &DensityOperator, b: &DensityOperator) -> f64 {
    a.eigenvalues()
        .iter()
        .zip(b.eigenvalues())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn run_cycle(theta_v_deg: f64, config: &SweepConfig) -> Result<CycleRun> {
    run_cycle_seeded(theta_v_deg, config, config.seed)
}

/// [`run_cycle`] with an explicit seed for the tomography noise.
pub fn run_cycle_seeded(theta_v_deg: f64, config: &SweepConfig, seed: u64) -> Result<CycleRun> {
    config.validate()?;
    if !(0.0..=45.0).contains(&theta_v_deg) {
        return Err(Error::out_of_range("theta_v_deg", theta_v_deg, "0 ≤ θ_V ≤ 45"));
    }
    let params = config.params()?;
    let kappa = kappa_degrees(theta_v_deg);
    let hot = hot_x_from_kappa(kappa, &params)?;
    let cold = thermal_state(params.x_c)?;
    let hot_target = thermal_state(hot.x_h)?;

    let simulated = simulate_strokes(cold.rho(), theta_v_deg, config)?;
    if config.is_ideal() {
        let checks = [
            (Stroke::Expansion, spectrum_drift(&simulated.ta, &simulated.tb), tolerance::SPECTRUM_PRESERVATION, "spectrum drift"),
            (Stroke::Compression, spectrum_drift(&simulated.tc, &simulated.td), tolerance::SPECTRUM_PRESERVATION, "spectrum drift"),
            (Stroke::ColdThermalization, simulated.ta2.max_abs_diff(&simulated.ta), tolerance::CYCLE_CLOSURE, "cycle closure defect"),
        ];
        for (stroke, value, limit, name) in checks {
            if value > limit {
                return in_stroke(stroke, Err(Error::out_of_range(name, value, "within tolerance")));
            }
        }
    }
    let snapshots = if config.is_ideal() {
        simulated
    } else {
        let mut session = MeasurementSession::new(config.noise_sigma, seed);
        simulated.try_map(|rho| Ok(session.tomograph(rho)?.rho))?
    };
    if !config.is_ideal() {
        log::debug!("θ_V = {theta_v_deg}: noisy tomography with seed {seed}");
    }

    let h1 = hamiltonian(1.0);
    let hn = hamiltonian(params.n);
    let s = &snapshots;
    let energetics = Energetics {
        w_ab: in_stroke(Stroke::Expansion, work_from_states(&s.ta, &s.tb, &h1, &hn))?,
        q_bc: in_stroke(Stroke::HotThermalization, heat_from_states(&s.tb, &s.tc, &hn))?,
        w_cd: in_stroke(Stroke::Compression, work_from_states(&s.tc, &s.td, &hn, &h1))?,
        q_da: in_stroke(Stroke::ColdThermalization, heat_from_states(&s.td, &s.ta2, &h1))?,
    };
    let expansion = in_stroke(
        Stroke::HotThermalization,
        entropy_production(&s.tb, &hot_target, hot.x_h, energetics.q_bc / params.n),
    )?;
    let compression = in_stroke(
        Stroke::ColdThermalization,
        entropy_production(&s.td, &cold, params.x_c, energetics.q_da),
    )?;
    let ledger = CycleLedger::new(theta_v_deg, kappa, hot.r, energetics, expansion, compression)?;
    let closed_form = closed_form_energetics(kappa, &params)?;
    Ok(CycleRun {
        max_delta_vs_closed_form: energetics.delta(&closed_form).max_abs(),
        ledger,
        hot,
        closed_form,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Dim;

    #[test]
    fn idle_cycle() {
        let run = run_cycle(0.0, &SweepConfig::default()).unwrap();
        let e = run.ledger.energetics;
        assert!(e.q_bc.abs() < 1e-15 && e.q_da.abs() < 1e-15);
        assert_eq!(run.ledger.r, 1.0);
        assert!(run.ledger.sigma_cycle.abs() < 1e-12);
        assert!(run.snapshots.ta2.max_abs_diff(&run.snapshots.ta) < 1e-12);
    }

    #[test]
    fn full_dephasing_cycle() {
        let run = run_cycle(45.0, &SweepConfig::default()).unwrap();
        let e = run.ledger.energetics;
        let t = 3f64.tanh();
        for (got, want) in e.values().into_iter().zip([-t, 2.0 * t, 0.0, -t]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((e.w_ab + 0.99506).abs() < 1e-5);
        assert!((run.ledger.w_extracted - 0.99506).abs() < 1e-5);
        assert_eq!(run.ledger.r, 0.0);
        assert!(run.snapshots.tc.max_abs_diff(&DensityOperator::maximally_mixed(Dim::Two)) < 1e-12);
    }

    #[test]
    fn replace_and_ipd_agree() {
        let ipd = SweepConfig::default();
        let replace = SweepConfig {
            da_stroke: DaStroke::Replace,
            ..SweepConfig::default()
        };
        for theta in [8.0, 22.5, 37.0] {
            let a = run_cycle(theta, &ipd).unwrap();
            let b = run_cycle(theta, &replace).unwrap();
            assert!(a.snapshots.ta2.max_abs_diff(&b.snapshots.ta2) < 1e-12);
            assert!(a.ledger.energetics.delta(&b.ledger.energetics).max_abs() < 1e-12);
        }
    }

    #[test]
    fn stroke_errors_name_the_stroke() {
        let config = SweepConfig::default();
        let bad = DensityOperator::maximally_mixed(Dim::Four);
        match simulate_strokes(&bad, 10.0, &config) {
            Err(Error::Stroke { stroke, .. }) => assert_eq!(stroke, Stroke::Expansion),
            other => panic!("{other:?}"),
        }
        assert!(run_cycle(46.0, &config).is_err());
    }

    #[test]
    fn noisy_cycle_is_seeded() {
        let config = SweepConfig {
            noise_sigma: 0.02,
            seed: 11,
            ..SweepConfig::default()
        };
        let a = run_cycle(22.5, &config).unwrap();
        let b = run_cycle(22.5, &config).unwrap();
        assert_eq!(a, b);
        assert!(a.max_delta_vs_closed_form > 0.0);
        assert!(a.max_delta_vs_closed_form < 0.1);
    }
}
