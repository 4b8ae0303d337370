use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_cycle_seeded, OutputFormat, SweepConfig};
use crate::error::{Error, Result};
use crate::quantum::{fidelity, DensityOperator};
use crate::thermo::{CycleLedger, Energetics};
use crate::tolerance;
use crate::tomography::{load_published, GoldenMatrix};

pub const CSV_COLUMNS: [&str; 13] = [
    "theta_v_deg",
    "kappa",
    "r",
    "W_AB",
    "Q_BC",
    "W_CD",
    "Q_DA",
    "dU_cycle",
    "W_extracted",
    "Sigma_e",
    "Sigma_c",
    "Sigma_cycle",
    "max_delta_vs_closed_form",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ledger: CycleLedger,
    pub closed_form: Energetics,
    pub max_delta_vs_closed_form: f64,
    /// Labeled `TA, TB, TC, TD, TA2`.
    pub snapshots: Vec<DensityOperator>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub theta_v_deg: f64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub version: String,
    pub seed: u64,
    pub config: SweepConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub metadata: ReportMetadata,
    /// Sorted by `r` ascending.
    pub rows: Vec<SweepRow>,
    pub failures: Vec<RowFailure>,
}

impl SweepReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn row(&self, theta_v_deg: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| (r.ledger.theta_v_deg - theta_v_deg).abs() < 1e-9)
    }

    pub fn max_delta_vs_closed_form(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.max_delta_vs_closed_form)
            .fold(0.0, f64::max)
    }
}

/// Runs one cycle per θ_V. Row `i` of the θ list draws its tomography noise
/// from seed `seed + i`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let outcomes: Vec<(f64, Result<SweepRow>)> = config
        .theta_list
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| {
            let row = run_cycle_seeded(theta, config, config.seed.wrapping_add(i as u64)).map(|run| {
                SweepRow {
                    ledger: run.ledger,
                    closed_form: run.closed_form,
                    max_delta_vs_closed_form: run.max_delta_vs_closed_form,
                    snapshots: run.snapshots.labeled(),
                }
            });
            (theta, row)
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (theta, outcome) in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => {
                log::error!("θ_V = {theta}: {e}");
                failures.push(RowFailure {
                    theta_v_deg: theta,
                    message: e.to_string(),
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        a.ledger
            .r
            .total_cmp(&b.ledger.r)
            .then(b.ledger.theta_v_deg.total_cmp(&a.ledger.theta_v_deg))
    });
    Ok(SweepReport {
        metadata: ReportMetadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
        },
        rows,
        failures,
    })
}

/// `%.12g`-style formatting, with `-0` printed as `0`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let body = if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        format!("{sign}{}", trim(body))
    } else {
        let body = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        let exp_sign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{body}e{exp_sign}{:02}", exp.abs())
    }
}

fn csv(report: &SweepReport) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for row in &report.rows {
        let l = &row.ledger;
        let e = &l.energetics;
        let fields = [
            l.theta_v_deg,
            l.kappa,
            l.r,
            e.w_ab,
            e.q_bc,
            e.w_cd,
            e.q_da,
            l.du_cycle,
            l.w_extracted,
            l.sigma_e,
            l.sigma_c,
            l.sigma_cycle,
            row.max_delta_vs_closed_form,
        ];
        let line: Vec<String> = fields.into_iter().map(format_sig).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    // Failed rows keep their θ and carry NaN everywhere else.
    for failure in &report.failures {
        let mut line = vec![format_sig(failure.theta_v_deg)];
        line.extend(std::iter::repeat_n("NaN".to_string(), CSV_COLUMNS.len() - 1));
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn emit(report: &SweepReport, format: OutputFormat) -> Result<Vec<u8>> {
    Ok(match format {
        OutputFormat::Csv => csv(report).into_bytes(),
        OutputFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)?;
            bytes.push(b'\n');
            bytes
        }
    })
}

pub fn write_report(report: &SweepReport, format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, emit(report, format)?)?;
    Ok(())
}

/// Reads a report written with [`OutputFormat::Json`].
pub fn load_report(bytes: &[u8]) -> Result<SweepReport> {
    Ok(serde_json::from_slice(bytes)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub golden: String,
    pub snapshot: String,
    pub fidelity: f64,
    /// Largest entrywise deviation from the printed matrix.
    pub max_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenComparison {
    pub entries: Vec<GoldenEntry>,
    /// `|Im ρ₀₁|` deviation of the post-dephasing state.
    pub bc_coherence_delta: f64,
    /// All fidelities reach the threshold.
    pub pass: bool,
}

/// Compares states in cycle order (`TA, TB, TC, TD, TA2`) with the published
/// matrices (`ini, AB, BC, CD, DA`).
pub fn compare_snapshots(snapshots: &[DensityOperator], golden: &[GoldenMatrix]) -> Result<GoldenComparison> {
    if snapshots.len() != golden.len() {
        return Err(Error::Report(format!(
            "{} snapshots for {} published matrices",
            snapshots.len(),
            golden.len()
        )));
    }
    let mut entries = Vec::with_capacity(golden.len());
    let mut bc_coherence_delta = f64::NAN;
    for (snap, gold) in snapshots.iter().zip(golden) {
        if gold.label == "BC" {
            bc_coherence_delta = (snap.get(0, 1).im - gold.published.get(0, 1).im).abs();
        }
        entries.push(GoldenEntry {
            golden: gold.label.clone(),
            snapshot: snap.label().unwrap_or("").to_string(),
            fidelity: fidelity(snap, &gold.rho)?,
            max_delta: snap.matrix().max_abs_diff(&gold.published),
        });
    }
    let pass = entries.iter().all(|e| e.fidelity >= tolerance::GOLDEN_FIDELITY);
    Ok(GoldenComparison {
        entries,
        bc_coherence_delta,
        pass,
    })
}

/// Compares the θ_V = 22.5° row of a report with the bundled measurements.
pub fn compare_golden(report: &SweepReport) -> Result<GoldenComparison> {
    let row = report
        .row(22.5)
        .ok_or_else(|| Error::Report("report has no θ_V = 22.5° row".into()))?;
    compare_snapshots(&row.snapshots, &load_published()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(22.5), "22.5");
        assert_eq!(format_sig(-0.995054753686730), "-0.995054753687");
        assert_eq!(format_sig(1.99010950737346), "1.99010950737");
        assert_eq!(format_sig(0.000123456789012345), "0.000123456789012");
        assert_eq!(format_sig(1.5e-7), "1.5e-07");
        assert_eq!(format_sig(-2.5e-17), "-2.5e-17");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_sig(9.9999999999996), "10");
        assert_eq!(format_sig(f64::NAN), "NaN");
    }

    #[test]
    fn golden_self_comparison() {
        let golden = load_published().unwrap();
        let states: Vec<DensityOperator> = golden.iter().map(|g| g.rho.clone()).collect();
        let cmp = compare_snapshots(&states, &golden).unwrap();
        assert!(cmp.pass);
        for e in &cmp.entries {
            assert!((e.fidelity - 1.0).abs() < 1e-12, "{e:?}");
        }
        assert!(compare_snapshots(&states[..2], &golden).is_err());
    }

    #[test]
    fn missing_row_is_an_error() {
        let config = SweepConfig {
            theta_list: vec![0.0, 45.0],
            ..SweepConfig::default()
        };
        let report = run_sweep(&config).unwrap();
        assert!(matches!(compare_golden(&report), Err(Error::Report(_))));
    }
}
