use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Register indices are capped so a program's register file can be allocated.
pub const MAX_REGISTER: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    Inc(u32),
    Dec(u32),
    /// Jump to the label when the register is zero.
    Jz(u32, usize),
    Jmp(usize),
    Halt,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("program has no instructions")]
    Empty,
    #[error("instruction {at} jumps to label {label}, but the program has {len} instructions")]
    LabelOutOfRange { at: usize, label: usize, len: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A validated register-machine program.
///
/// Input is placed in register 1, the output is register 0 at halt. `DEC` on a
/// zero register is a no-op. Running past the last instruction halts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Instruction>", into = "Vec<Instruction>")]
pub struct MachineProgram {
    instructions: Vec<Instruction>,
}

impl TryFrom<Vec<Instruction>> for MachineProgram {
    type Error = MachineError;
    fn try_from(instructions: Vec<Instruction>) -> Result<Self, Self::Error> {
        Self::new(instructions)
    }
}

impl From<MachineProgram> for Vec<Instruction> {
    fn from(p: MachineProgram) -> Self {
        p.instructions
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    Halted { output: u64, steps: u64 },
    OutOfBudget,
}

impl MachineProgram {
    pub fn new(instructions: Vec<Instruction>) -> Result<Self, MachineError> {
        if instructions.is_empty() {
            return Err(MachineError::Empty);
        }
        let len = instructions.len();
        for (at, ins) in instructions.iter().enumerate() {
            if let Instruction::Jz(_, label) | Instruction::Jmp(label) = *ins {
                if label >= len {
                    return Err(MachineError::LabelOutOfRange { at, label, len });
                }
            }
        }
        Ok(Self { instructions })
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Declared register count: one past the highest register named, and at
    /// least 2 so the input and output registers always exist.
    pub fn register_count(&self) -> usize {
        self.instructions
            .iter()
            .filter_map(|ins| match *ins {
                Instruction::Inc(r) | Instruction::Dec(r) | Instruction::Jz(r, _) => {
                    Some(r as usize + 1)
                }
                _ => None,
            })
            .max()
            .unwrap_or(0)
            .max(2)
    }

    /// `[HALT]`.
    pub fn halt() -> Self {
        Self {
            instructions: vec![Instruction::Halt],
        }
    }

    /// `INC 0` repeated `value` times, then `HALT`: outputs `value` on every
    /// input in `value + 1` steps.
    pub fn constant(value: u64) -> Self {
        let mut instructions = vec![Instruction::Inc(0); value as usize];
        instructions.push(Instruction::Halt);
        Self { instructions }
    }

    /// A program that halts after exactly `steps` steps on every input and
    /// outputs 0. `steps` must be at least 1.
    pub fn delay(steps: u64) -> Self {
        assert!(steps >= 1, "a program needs at least one step to halt");
        if steps == 1 {
            return Self::halt();
        }
        // pad + count + 3 * count + 2 steps: the countdown loop costs three per
        // iteration plus the final JZ and HALT.
        let count = ((steps - 2) / 4) as usize;
        let pad = ((steps - 2) % 4) as usize;
        let mut instructions = vec![Instruction::Inc(3); pad];
        instructions.extend(std::iter::repeat_n(Instruction::Inc(2), count));
        let top = instructions.len();
        instructions.extend([
            Instruction::Jz(2, top + 3),
            Instruction::Dec(2),
            Instruction::Jmp(top),
            Instruction::Halt,
        ]);
        Self { instructions }
    }

    /// `[JMP 0]`.
    pub fn diverge() -> Self {
        Self {
            instructions: vec![Instruction::Jmp(0)],
        }
    }

    /// Execute on `input` for at most `step_budget` steps.
    pub fn run(&self, input: u64, step_budget: u64) -> RunOutcome {
        let mut job = Execution::new(std::sync::Arc::new(Compiled::new(self)), input);
        while job.steps < step_budget {
            if let Some(output) = job.step() {
                return RunOutcome::Halted {
                    output,
                    steps: job.steps,
                };
            }
        }
        RunOutcome::OutOfBudget
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "INC {r}"),
            Instruction::Dec(r) => write!(f, "DEC {r}"),
            Instruction::Jz(r, l) => write!(f, "JZ {r} {l}"),
            Instruction::Jmp(l) => write!(f, "JMP {l}"),
            Instruction::Halt => write!(f, "HALT"),
        }
    }
}

impl FromStr for MachineProgram {
    type Err = MachineError;

    /// One instruction per line; `#` starts a comment; mnemonics are
    /// case-insensitive; labels are absolute instruction indices.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut instructions = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| MachineError::Parse {
                line: n + 1,
                message,
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u64, MachineError> {
                let w = words
                    .get(i)
                    .ok_or_else(|| parse_err(format!("missing operand in {line:?}")))?;
                w.parse::<u64>()
                    .map_err(|_| parse_err(format!("bad operand {w:?}")))
            };
            let reg = |i: usize| -> Result<u32, MachineError> {
                let v = num(i)?;
                u32::try_from(v).map_err(|_| parse_err(format!("register {v} out of range")))
            };
            let label = |i: usize| -> Result<usize, MachineError> {
                let v = num(i)?;
                usize::try_from(v).map_err(|_| parse_err(format!("label {v} out of range")))
            };
            let (ins, arity) = match words[0].to_ascii_uppercase().as_str() {
                "INC" => (Instruction::Inc(reg(1)?), 2),
                "DEC" => (Instruction::Dec(reg(1)?), 2),
                "JZ" => (Instruction::Jz(reg(1)?, label(2)?), 3),
                "JMP" => (Instruction::Jmp(label(1)?), 2),
                "HALT" => (Instruction::Halt, 1),
                other => return Err(parse_err(format!("unknown instruction {other:?}"))),
            };
            if words.len() != arity {
                return Err(parse_err(format!("wrong operand count in {line:?}")));
            }
            instructions.push(ins);
        }
        Self::new(instructions)
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Inc(u32),
    Dec(u32),
    Jz(u32, u32),
    Jmp(u32),
    Halt,
}

/// A program with its registers renumbered densely, ready to execute.
#[derive(Debug)]
pub(crate) struct Compiled {
    ops: Vec<Op>,
    registers: usize,
}

impl Compiled {
    pub(crate) fn new(program: &MachineProgram) -> Self {
        // Registers 0 and 1 keep their roles; the rest are packed in order of
        // first use so sparse register names cost nothing.
        let mut names: Vec<u32> = vec![0, 1];
        let mut slot = |r: u32| -> u32 {
            match names.iter().position(|&n| n == r) {
                Some(i) => i as u32,
                None => {
                    names.push(r);
                    (names.len() - 1) as u32
                }
            }
        };
        let ops = program
            .instructions
            .iter()
            .map(|ins| match *ins {
                Instruction::Inc(r) => Op::Inc(slot(r)),
                Instruction::Dec(r) => Op::Dec(slot(r)),
                Instruction::Jz(r, l) => Op::Jz(slot(r), l as u32),
                Instruction::Jmp(l) => Op::Jmp(l as u32),
                Instruction::Halt => Op::Halt,
            })
            .collect();
        Self {
            ops,
            registers: names.len(),
        }
    }
}

/// The state of one program run, advanced a single step at a time.
#[derive(Debug)]
pub(crate) struct Execution {
    program: std::sync::Arc<Compiled>,
    pc: u32,
    registers: Box<[u64]>,
    pub(crate) steps: u64,
}

impl Execution {
    pub(crate) fn new(program: std::sync::Arc<Compiled>, input: u64) -> Self {
        let mut registers = vec![0u64; program.registers].into_boxed_slice();
        registers[1] = input;
        Self {
            program,
            pc: 0,
            registers,
            steps: 0,
        }
    }

    /// Execute one instruction; returns the output if the machine halted.
    #[inline]
    pub(crate) fn step(&mut self) -> Option<u64> {
        self.steps += 1;
        let ops = &self.program.ops;
        match ops[self.pc as usize] {
            Op::Halt => return Some(self.registers[0]),
            Op::Inc(r) => {
                self.registers[r as usize] += 1;
                self.pc += 1;
            }
            Op::Dec(r) => {
                let v = &mut self.registers[r as usize];
                *v = v.saturating_sub(1);
                self.pc += 1;
            }
            Op::Jz(r, l) => {
                if self.registers[r as usize] == 0 {
                    self.pc = l;
                } else {
                    self.pc += 1;
                }
            }
            Op::Jmp(l) => self.pc = l,
        }
        (self.pc as usize >= ops.len()).then(|| self.registers[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Instruction::*;

    fn prog(ins: Vec<Instruction>) -> MachineProgram {
        MachineProgram::new(ins).unwrap()
    }

    #[test]
    fn run_examples() {
        assert_eq!(
            prog(vec![Halt]).run(5, 10),
            RunOutcome::Halted { output: 0, steps: 1 }
        );
        assert_eq!(
            prog(vec![Inc(0), Inc(0), Halt]).run(0, 10),
            RunOutcome::Halted { output: 2, steps: 3 }
        );
        assert_eq!(prog(vec![Jmp(0)]).run(0, 1000), RunOutcome::OutOfBudget);
    }

    #[test]
    fn budget_is_inclusive() {
        let p = prog(vec![Inc(0), Inc(0), Halt]);
        assert_eq!(p.run(0, 2), RunOutcome::OutOfBudget);
        assert_eq!(p.run(0, 3), RunOutcome::Halted { output: 2, steps: 3 });
        assert_eq!(prog(vec![Halt]).run(0, 0), RunOutcome::OutOfBudget);
    }

    #[test]
    fn dec_on_zero_is_noop_and_fallthrough_halts() {
        let p = prog(vec![Dec(0), Inc(0)]);
        assert_eq!(p.run(0, 10), RunOutcome::Halted { output: 1, steps: 2 });
    }

    #[test]
    fn copies_input() {
        // r0 := r1
        let p = prog(vec![Jz(1, 4), Dec(1), Inc(0), Jmp(0), Halt]);
        assert_eq!(p.run(7, 1000), RunOutcome::Halted { output: 7, steps: 7 * 4 + 2 });
    }

    #[test]
    fn malformed_labels_are_rejected() {
        assert_eq!(
            MachineProgram::new(vec![Jmp(3)]),
            Err(MachineError::LabelOutOfRange { at: 0, label: 3, len: 1 })
        );
        assert_eq!(MachineProgram::new(vec![]), Err(MachineError::Empty));
    }

    #[test]
    fn delay_programs_take_exact_time() {
        for t in [1u64, 2, 3, 4, 5, 6, 7, 10, 97, 10_000] {
            for input in [0, 3] {
                assert_eq!(
                    MachineProgram::delay(t).run(input, t),
                    RunOutcome::Halted { output: 0, steps: t },
                    "delay({t}) on {input}"
                );
            }
            assert_eq!(MachineProgram::delay(t).run(0, t - 1), RunOutcome::OutOfBudget);
        }
    }

    #[test]
    fn constants() {
        assert_eq!(
            MachineProgram::constant(22).run(9, 100),
            RunOutcome::Halted { output: 22, steps: 23 }
        );
    }

    #[test]
    fn text_format() {
        let text = "# countdown\ninc 2\nINC 2\n  jz 2 5 # done?\nDEC 2\nJmp 2\nhalt\n";
        let p: MachineProgram = text.parse().unwrap();
        assert_eq!(p.instructions(), &[Inc(2), Inc(2), Jz(2, 5), Dec(2), Jmp(2), Halt]);
        assert_eq!(p.to_text().parse::<MachineProgram>().unwrap(), p);
        assert_eq!(p.register_count(), 3);

        assert!(matches!(
            "INC".parse::<MachineProgram>(),
            Err(MachineError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "HALT\nFOO 1".parse::<MachineProgram>(),
            Err(MachineError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            "JMP 4".parse::<MachineProgram>(),
            Err(MachineError::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            "HALT 3".parse::<MachineProgram>(),
            Err(MachineError::Parse { .. })
        ));
    }

    #[test]
    fn sparse_registers_compile_densely() {
        let p = prog(vec![Inc(4_000_000_000), Inc(4_000_000_000), Halt]);
        assert_eq!(p.register_count(), 4_000_000_001);
        assert_eq!(p.run(0, 10), RunOutcome::Halted { output: 0, steps: 3 });
    }
}
