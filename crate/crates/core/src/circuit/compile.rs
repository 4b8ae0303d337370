use std::collections::HashSet;

use super::{CircuitProgram, Instruction};
use crate::error::{Error, Result};
use crate::optics::{self, ChannelBlock, OpticalElement};
use crate::quantum::{partial_trace_path, DensityOperator};
use crate::thermo::thermal_state;

#[derive(Clone, Debug)]
enum Op {
    Element(OpticalElement),
    /// Attaches the path ancilla, then applies the joint unitary.
    Open(ChannelBlock),
    /// Applies the joint unitary, then traces the path out.
    Close(ChannelBlock),
    Tap(String),
}

/// An executable, immutable instruction sequence.
#[derive(Clone, Debug)]
pub struct Pipeline {
    initial: DensityOperator,
    ops: Vec<Op>,
}

/// The result of running a pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    /// Reduced polarization states in tap order, labeled.
    pub snapshots: Vec<DensityOperator>,
    /// Final state; joint if a `pd` was left open.
    pub final_state: DensityOperator,
}

impl Execution {
    pub fn snapshot(&self, label: &str) -> Option<&DensityOperator> {
        self.snapshots.iter().find(|s| s.label() == Some(label))
    }
}

fn reduced(state: &DensityOperator) -> Result<DensityOperator> {
    if state.dim() == 4 {
        partial_trace_path(state)
    } else {
        Ok(state.clone())
    }
}

impl Pipeline {
    pub fn initial_state(&self) -> &DensityOperator {
        &self.initial
    }

    pub fn run(&self) -> Result<Execution> {
        self.run_from(&self.initial)
    }

    /// Runs the instruction sequence on a different polarization input.
    pub fn run_from(&self, initial: &DensityOperator) -> Result<Execution> {
        if initial.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: initial.dim(),
            });
        }
        let mut state = initial.clone();
        let mut snapshots = Vec::new();
        for op in &self.ops {
            state = match op {
                Op::Element(element) if state.dim() == 4 => state.evolve(&element.on_both_paths()?)?,
                Op::Element(element) => state.evolve(element.matrix())?,
                Op::Open(block) => block.apply_joint(&state.tensor(&optics::ancilla())?)?,
                Op::Close(block) => partial_trace_path(&block.apply_joint(&state)?)?,
                Op::Tap(label) => {
                    snapshots.push(reduced(&state)?.with_label(label.clone()));
                    continue;
                }
            };
        }
        Ok(Execution {
            snapshots,
            final_state: state,
        })
    }
}

/// Type-checks a program and builds its pipeline.
pub fn compile(program: &CircuitProgram) -> Result<Pipeline> {
    let fail = |line: usize, message: String| Error::Compile { line, message };
    let mut items = program.instructions().iter().zip(program.positions());
    let initial = match items.next() {
        Some((Instruction::InitRc, _)) => DensityOperator::right_circular(),
        Some((Instruction::InitThermal { x }, pos)) => thermal_state(*x)
            .map_err(|e| fail(pos.line, e.to_string()))?
            .rho()
            .clone(),
        Some((_, pos)) => return Err(fail(pos.line, "program must start with `init`".into())),
        None => return Err(fail(0, "empty program".into())),
    };

    let mut joint = false;
    let mut labels = HashSet::new();
    let mut ops = Vec::with_capacity(program.len());
    for (instruction, pos) in items {
        let line = pos.line;
        let wrap = |e: Error| fail(line, e.to_string());
        let op = match instruction {
            Instruction::InitRc | Instruction::InitThermal { .. } => {
                return Err(fail(line, "`init` may only appear once, first".into()))
            }
            Instruction::Hwp { deg } => Op::Element(optics::hwp(deg.to_radians())),
            Instruction::Qwp { deg } => Op::Element(optics::qwp(deg.to_radians())),
            Instruction::Rot { deg } => Op::Element(optics::rotation(deg.to_radians())),
            Instruction::Expand { n, omega0_tau_deg } => Op::Element(
                optics::expansion_unitary(*n, omega0_tau_deg.to_radians()).map_err(wrap)?,
            ),
            Instruction::Compress { n, omega0_tau_deg } => Op::Element(
                optics::compression_unitary(*n, omega0_tau_deg.to_radians()).map_err(wrap)?,
            ),
            Instruction::Pd { deg } => {
                if joint {
                    return Err(fail(line, "`pd` while the path ancilla is already in use".into()));
                }
                joint = true;
                Op::Open(optics::pd_block(deg.to_radians()).map_err(wrap)?)
            }
            Instruction::Ipd { deg } => {
                if !joint {
                    return Err(fail(line, "`ipd` without a preceding `pd`".into()));
                }
                joint = false;
                Op::Close(optics::ipd_block(deg.to_radians()).map_err(wrap)?)
            }
            Instruction::Tomo { label } => {
                if !labels.insert(label.clone()) {
                    return Err(fail(line, format!("duplicate tap label `{label}`")));
                }
                Op::Tap(label.clone())
            }
        };
        ops.push(op);
    }
    Ok(Pipeline { initial, ops })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::quantum::Dim;

    fn run(src: &str) -> Execution {
        compile(&parse(src).unwrap()).unwrap().run().unwrap()
    }

    #[test]
    fn init_then_tap() {
        let ex = run("init rc\ntomo A");
        let a = ex.snapshot("A").unwrap();
        assert!(a.max_abs_diff(&DensityOperator::right_circular()) == 0.0);
    }

    #[test]
    fn full_dephasing_gives_mixed_state() {
        let ex = run("init rc\npd 45\ntomo C");
        let c = ex.snapshot("C").unwrap();
        assert!(c.max_abs_diff(&DensityOperator::maximally_mixed(Dim::Two)) < 1e-15);
        assert_eq!(ex.final_state.dim(), 4);
    }

    #[test]
    fn dephasing_matches_kraus_form() {
        let ex = run("init thermal 1.5\npd 17\ntomo C\nipd 17\ntomo A");
        let rho = thermal_state(1.5).unwrap().rho().clone();
        let kraus = optics::pd_block(17f64.to_radians()).unwrap().apply_kraus(&rho).unwrap();
        assert!(ex.snapshot("C").unwrap().max_abs_diff(&kraus) < 1e-12);
        assert!(ex.snapshot("A").unwrap().max_abs_diff(&rho) < 1e-12);
        assert_eq!(ex.final_state.dim(), 2);
    }

    #[test]
    fn elements_act_on_both_paths() {
        let ex = run("init rc\npd 30\nhwp 90\ntomo X");
        let direct = run("init rc\npd 30\ntomo Y");
        let swapped = direct
            .snapshot("Y")
            .unwrap()
            .evolve(optics::hwp(std::f64::consts::FRAC_PI_2).matrix())
            .unwrap();
        assert!(ex.snapshot("X").unwrap().max_abs_diff(&swapped) < 1e-12);
    }

    #[test]
    fn compile_errors() {
        let err = |src: &str| compile(&parse(src).unwrap()).unwrap_err();
        assert!(matches!(err("init rc\nipd 10"), Error::Compile { line: 2, .. }));
        assert!(matches!(err("init rc\npd 10\npd 10"), Error::Compile { line: 3, .. }));
        assert!(matches!(err("hwp 10"), Error::Compile { line: 1, .. }));
        assert!(matches!(err("init rc\ninit rc"), Error::Compile { line: 2, .. }));
        assert!(matches!(err("init rc\ntomo A\ntomo A"), Error::Compile { line: 3, .. }));
        assert!(compile(&CircuitProgram::default()).is_err());
    }

    #[test]
    fn run_from_other_input() {
        let pipeline = compile(&parse("init rc\npd 45\nipd 45\ntomo A").unwrap()).unwrap();
        let rho = thermal_state(0.7).unwrap().rho().clone();
        let ex = pipeline.run_from(&rho).unwrap();
        assert!(ex.snapshot("A").unwrap().max_abs_diff(&rho) < 1e-12);
        assert!(pipeline.run_from(&rho.tensor(&optics::ancilla()).unwrap()).is_err());
    }
}
