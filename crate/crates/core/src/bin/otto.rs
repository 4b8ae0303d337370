use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otto_core::circuit;
use otto_core::runner::{self, OutputFormat, SweepConfig};
use otto_core::tolerance;
use otto_core::tomography::{self, parse_intensity_file, stokes_from_intensities};
use otto_core::Error;

#[derive(Parser)]
#[command(name = "otto", version, about = "Optical quantum Otto engine simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file and print its tap snapshots
    Run {
        file: PathBuf,
        /// text or json
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep θ_V and emit the cycle ledger
    Sweep(SweepArgs),
    /// Reconstruct a polarization state from an intensity file
    Tomo {
        file: PathBuf,
        /// text or json
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the θ_V = 22.5° cycle with the published density matrices
    Golden(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated θ_V values in degrees
    #[arg(long)]
    theta_list: Option<String>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    xc: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

impl SweepArgs {
    fn config(&self) -> otto_core::Result<SweepConfig> {
        let mut config = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        if let Some(list) = &self.theta_list {
            config.set("theta_list", list)?;
        }
        let numeric = [("n", self.n), ("x_c", self.xc), ("noise_sigma", self.noise)];
        for (key, value) in numeric {
            if let Some(v) = value {
                config.set(key, &v.to_string())?;
            }
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output = Some(out.clone());
        }
        if let Some(format) = &self.format {
            config.set("format", format)?;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Distinguishes "the numbers disagree" from everything else.
enum Failure {
    Comparison(String),
    Usage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> otto_core::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn text_or_json(format: &str) -> otto_core::Result<bool> {
    match format {
        "text" => Ok(false),
        "json" => Ok(true),
        other => Err(Error::Config(format!("format must be `text` or `json`, got `{other}`"))),
    }
}

fn run_circuit(file: &PathBuf, format: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    let json = text_or_json(format)?;
    let program = circuit::parse_bytes(&std::fs::read(file)?)?;
    let execution = circuit::compile(&program)?.run()?;
    let bytes = if json {
        let mut b = serde_json::to_vec_pretty(&execution.snapshots).map_err(Error::from)?;
        b.push(b'\n');
        b
    } else {
        let mut text = String::new();
        for snap in &execution.snapshots {
            text.push_str(&format!("{}\n{}\n", snap.label().unwrap_or(""), snap.matrix()));
        }
        text.into_bytes()
    };
    write_output(out, &bytes)?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let config = args.config()?;
    let report = runner::run_sweep(&config)?;
    write_output(config.output.as_ref(), &runner::emit(&report, config.format)?)?;
    if !report.is_complete() {
        return Err(Failure::Comparison(format!("{} row(s) failed", report.failures.len())));
    }
    let delta = report.max_delta_vs_closed_form();
    if config.is_ideal() && delta > tolerance::ENERGETICS {
        return Err(Failure::Comparison(format!(
            "simulator deviates from the closed form by {delta:e}"
        )));
    }
    Ok(())
}

fn tomo(file: &PathBuf, format: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    let json = text_or_json(format)?;
    let records = parse_intensity_file(&std::fs::read_to_string(file)?)?;
    let stokes = stokes_from_intensities(&records)?;
    let reconstruction = tomography::reconstruct(&stokes)?;
    let bytes = if json {
        let value = serde_json::json!({
            "stokes": stokes,
            "rho": reconstruction.rho,
            "projected": reconstruction.projected,
        });
        let mut b = serde_json::to_vec_pretty(&value).map_err(Error::from)?;
        b.push(b'\n');
        b
    } else {
        let mut text = format!(
            "S = ({}, {}, {}, {})\n",
            stokes.s0, stokes.s1, stokes.s2, stokes.s3
        );
        if reconstruction.projected {
            text.push_str("projected onto the Bloch sphere\n");
        }
        text.push_str(&format!("{}\n", reconstruction.rho.matrix()));
        text.into_bytes()
    };
    write_output(out, &bytes)?;
    Ok(())
}

fn golden(args: &SweepArgs) -> Result<(), Failure> {
    let mut config = args.config()?;
    config.theta_list = vec![22.5];
    let report = runner::run_sweep(&config)?;
    let comparison = runner::compare_golden(&report)?;
    let text = if config.format == OutputFormat::Json {
        let mut s = serde_json::to_string_pretty(&comparison).map_err(Error::from)?;
        s.push('\n');
        s
    } else {
        let mut s = String::from("published  simulated  fidelity  max_delta\n");
        for e in &comparison.entries {
            s.push_str(&format!(
                "{:<10} {:<10} {:.6}  {:.6}\n",
                e.golden, e.snapshot, e.fidelity, e.max_delta
            ));
        }
        s.push_str(&format!("B->C coherence delta {:.6}\n", comparison.bc_coherence_delta));
        s.push_str(if comparison.pass { "PASS\n" } else { "FAIL\n" });
        s
    };
    write_output(config.output.as_ref(), text.as_bytes())?;
    if comparison.pass {
        Ok(())
    } else {
        Err(Failure::Comparison(format!(
            "fidelity below {} for at least one matrix",
            tolerance::GOLDEN_FIDELITY
        )))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { file, format, out } => run_circuit(file, format, out.as_ref()),
        Command::Sweep(args) => sweep(args),
        Command::Tomo { file, format, out } => tomo(file, format, out.as_ref()),
        Command::Golden(args) => golden(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Comparison(message)) => {
            eprintln!("otto: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(Error::Parse(errors))) => {
            for e in &errors {
                eprintln!("otto: {e}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("otto: {e}");
            ExitCode::from(2)
        }
    }
}
