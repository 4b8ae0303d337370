//! A small line-oriented language for describing the optical circuit, and
//! its compilation to a pipeline over the polarization (+ path) state.
//!
//! ```text
//! init rc          # or: init thermal 3
//! tomo TA
//! expand 2 180     # gap ratio, ω₀τ in degrees
//! pd 22.5
//! tomo TC
//! ```

mod compile;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use compile::{compile, Execution, Pipeline};
pub use parse::{parse, parse_bytes};

/// Maximum number of errors collected from one source before giving up.
pub const MAX_ERRORS: usize = crate::tolerance::MAX_PARSE_ERRORS;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instruction {
    InitRc,
    InitThermal { x: f64 },
    Hwp { deg: f64 },
    Qwp { deg: f64 },
    Rot { deg: f64 },
    Expand { n: f64, omega0_tau_deg: f64 },
    Compress { n: f64, omega0_tau_deg: f64 },
    Pd { deg: f64 },
    Ipd { deg: f64 },
    Tomo { label: String },
}

impl Instruction {
    pub fn keyword(&self) -> &'static str {
        match self {
            Instruction::InitRc | Instruction::InitThermal { .. } => "init",
            Instruction::Hwp { .. } => "hwp",
            Instruction::Qwp { .. } => "qwp",
            Instruction::Rot { .. } => "rot",
            Instruction::Expand { .. } => "expand",
            Instruction::Compress { .. } => "compress",
            Instruction::Pd { .. } => "pd",
            Instruction::Ipd { .. } => "ipd",
            Instruction::Tomo { .. } => "tomo",
        }
    }
}

/// 1-based source position of an instruction's keyword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CircuitProgram {
    instructions: Vec<Instruction>,
    positions: Vec<Position>,
}

impl CircuitProgram {
    /// Builds a program directly; positions are numbered as if each
    /// instruction sat on its own line.
    pub fn from_instructions(instructions: Vec<Instruction>) -> Self {
        let positions = (1..=instructions.len())
            .map(|line| Position { line, column: 1 })
            .collect();
        Self {
            instructions,
            positions,
        }
    }

    pub(crate) fn push(&mut self, instruction: Instruction, position: Position) {
        self.instructions.push(instruction);
        self.positions.push(position);
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// The full engine cycle: thermal-limit input, tap at every stroke boundary.
    pub fn otto_cycle(theta_v_deg: f64, n: f64, omega0_tau_deg: f64) -> Self {
        use Instruction::*;
        let tomo = |label: &str| Tomo {
            label: label.to_string(),
        };
        Self::from_instructions(vec![
            InitRc,
            tomo("TA"),
            Expand { n, omega0_tau_deg },
            tomo("TB"),
            Pd { deg: theta_v_deg },
            tomo("TC"),
            Compress { n, omega0_tau_deg },
            tomo("TD"),
            Ipd { deg: theta_v_deg },
            tomo("TA2"),
        ])
    }
}

/// Structural equality: source positions are ignored.
impl PartialEq for CircuitProgram {
    fn eq(&self, other: &Self) -> bool {
        self.instructions == other.instructions
    }
}

/// Canonical text: one instruction per line, comments dropped, angles with
/// one decimal, other numbers in shortest round-trip form.
pub fn format(program: &CircuitProgram) -> String {
    let mut out = String::new();
    for instruction in program.instructions() {
        out.push_str(&format_instruction(instruction));
        out.push('\n');
    }
    out
}

fn format_instruction(instruction: &Instruction) -> String {
    let angle = |deg: f64| format!("{deg:.1}");
    let kw = instruction.keyword();
    match instruction {
        Instruction::InitRc => "init rc".to_string(),
        Instruction::InitThermal { x } => format!("init thermal {x}"),
        Instruction::Hwp { deg }
        | Instruction::Qwp { deg }
        | Instruction::Rot { deg }
        | Instruction::Pd { deg }
        | Instruction::Ipd { deg } => format!("{kw} {}", angle(*deg)),
        Instruction::Expand { n, omega0_tau_deg } | Instruction::Compress { n, omega0_tau_deg } => {
            format!("{kw} {n} {}", angle(*omega0_tau_deg))
        }
        Instruction::Tomo { label } => format!("tomo {label}"),
    }
}

impl fmt::Display for CircuitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The offending token; empty when the error is a missing token.
    pub token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (`{}`)", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_round_trips_cycle() {
        let p = CircuitProgram::otto_cycle(22.5, 2.0, 180.0);
        let text = format(&p);
        assert_eq!(
            text,
            "init rc\ntomo TA\nexpand 2 180.0\ntomo TB\npd 22.5\ntomo TC\ncompress 2 180.0\ntomo TD\nipd 22.5\ntomo TA2\n"
        );
        let back = parse(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(format(&back), text);
    }

    #[test]
    fn format_canonicalizes() {
        let p = parse("  hwp   10   # plate\n\n# only a comment\nqwp 7.24\ninit thermal 3.0\n").unwrap();
        assert_eq!(format(&p), "hwp 10.0\nqwp 7.2\ninit thermal 3\n");
        let again = format(&parse(&format(&p)).unwrap());
        assert_eq!(again, format(&p));
    }

    #[test]
    fn parse_error_display() {
        let e = ParseError {
            line: 2,
            column: 4,
            message: "angle out of range".into(),
            token: "50".into(),
        };
        assert_eq!(e.to_string(), "2:4: angle out of range (`50`)");
    }
}
