use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermo::EngineParams;

/// θ_V settings of the reference run, in degrees.
pub const DEFAULT_THETAS: [f64; 7] = [0.0, 8.0, 16.0, 22.5, 29.0, 37.0, 45.0];

/// How the D→A stroke is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DaStroke {
    /// Inverted dephasing interferometer consuming the path ancilla.
    Ipd,
    /// Direct replacement by the cold thermal state.
    Replace,
}

impl FromStr for DaStroke {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ipd" => Ok(DaStroke::Ipd),
            "replace" => Ok(DaStroke::Replace),
            other => Err(Error::Config(format!(
                "da_stroke must be `ipd` or `replace`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("format must be `csv` or `json`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Degrees.
    pub theta_list: Vec<f64>,
    pub n: f64,
    pub x_c: f64,
    pub omega0_tau: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub da_stroke: DaStroke,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta_list: DEFAULT_THETAS.to_vec(),
            n: 2.0,
            x_c: 3.0,
            omega0_tau: std::f64::consts::PI,
            noise_sigma: 0.0,
            seed: 0,
            da_stroke: DaStroke::Ipd,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: `{value}` is not a number")))
}

/// Parses a comma-separated list of degrees.
pub(crate) fn parse_theta_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_f64("theta_list", v))
        .collect()
}

impl SweepConfig {
    /// Reads `key = value` lines over the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", idx + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "theta_list" => self.theta_list = parse_theta_list(value)?,
            "n" => self.n = parse_f64(key, value)?,
            "x_c" => self.x_c = parse_f64(key, value)?,
            "omega0_tau" => self.omega0_tau = parse_f64(key, value)?,
            "noise_sigma" => self.noise_sigma = parse_f64(key, value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("seed: `{value}` is not an unsigned integer")))?
            }
            "da_stroke" => self.da_stroke = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_list.is_empty() {
            return Err(Error::Config("theta_list is empty".into()));
        }
        for &theta in &self.theta_list {
            if !(0.0..=45.0).contains(&theta) {
                return Err(Error::Config(format!("theta {theta} outside 0 to 45 degrees")));
            }
        }
        self.params().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.omega0_tau > 0.0) || !self.omega0_tau.is_finite() {
            return Err(Error::Config(format!("omega0_tau must be positive, got {}", self.omega0_tau)));
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::Config(format!("noise_sigma must be ≥ 0, got {}", self.noise_sigma)));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<EngineParams> {
        EngineParams::new(1.0, self.n, self.x_c)
    }

    pub fn is_ideal(&self) -> bool {
        self.noise_sigma == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SweepConfig::default();
        assert_eq!(c.theta_list, DEFAULT_THETAS);
        assert_eq!((c.n, c.x_c), (2.0, 3.0));
        assert_eq!(c.omega0_tau, std::f64::consts::PI);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn parse_file() {
        let c = SweepConfig::parse(
            "# sweep\ntheta_list = 0, 22.5 ,45\nn=3\nx_c = 2.5\nnoise_sigma=0.01\nseed = 42\nda_stroke = replace\nformat = json\n",
        )
        .unwrap();
        assert_eq!(c.theta_list, vec![0.0, 22.5, 45.0]);
        assert_eq!((c.n, c.x_c, c.noise_sigma, c.seed), (3.0, 2.5, 0.01, 42));
        assert_eq!(c.da_stroke, DaStroke::Replace);
        assert_eq!(c.format, OutputFormat::Json);
    }

    #[test]
    fn invalid_configs() {
        for text in [
            "theta_list = 50",
            "theta_list = -1",
            "n = 1",
            "x_c = 0",
            "omega0_tau = 0",
            "noise_sigma = -0.1",
            "seed = -3",
            "colour = red",
            "da_stroke = maybe",
            "no equals sign",
            "theta_list = ",
        ] {
            assert!(matches!(SweepConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }
}
