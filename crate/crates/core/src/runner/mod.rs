//! Orchestration of the full cycle: single runs, θ_V sweeps, reports and
//! comparison against the published measurements.

mod config;
mod cycle;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use config::{DaStroke, OutputFormat, SweepConfig, DEFAULT_THETAS};
pub use cycle::{run_cycle, run_cycle_seeded, simulate_strokes, CycleRun, StrokeStates};
pub use report::{
    compare_golden, compare_snapshots, emit, format_sig, load_report, run_sweep, write_report,
    GoldenComparison, GoldenEntry, ReportMetadata, RowFailure, SweepReport, SweepRow, CSV_COLUMNS,
};

/// The four strokes, named by their end points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stroke {
    /// Gap expansion, A→B.
    Expansion,
    /// Dephasing against the hot reservoir, B→C.
    HotThermalization,
    /// Gap compression, C→D.
    Compression,
    /// Return to the cold thermal state, D→A.
    ColdThermalization,
}

impl fmt::Display for Stroke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stroke::Expansion => "A->B expansion",
            Stroke::HotThermalization => "B->C hot thermalization",
            Stroke::Compression => "C->D compression",
            Stroke::ColdThermalization => "D->A cold thermalization",
        })
    }
}
