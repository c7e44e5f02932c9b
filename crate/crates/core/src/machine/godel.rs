//! Canonical numbering of programs and the indexed family `e -> program`.
//!
//! An instruction is coded by a bijection with the naturals:
//!
//! ```text
//! HALT -> 0   INC r -> 1 + 4r   DEC r -> 2 + 4r   JMP l -> 3 + 4l   JZ r l -> 4 + 4<r, l>
//! ```
//!
//! and a list by `[] -> 0`, `h :: t -> 1 + <h, t>` with `<., .>` the Cantor
//! pairing. Every natural therefore names a list of instructions; [`decode`]
//! maps it to a valid program by replacing the empty list with `[HALT]` and
//! reducing labels modulo the program length. Valid programs are exactly the
//! fixed points of that canonicalization, so `decode(encode(p)) == p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::program::{Instruction, MachineProgram};

/// Canonical code of a program.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelIndex(pub BigUint);

impl GodelIndex {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for GodelIndex {
    fn from(n: u64) -> Self {
        Self(BigUint::from(n))
    }
}

impl fmt::Display for GodelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for GodelIndex {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(Self)
    }
}

impl Serialize for GodelIndex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GodelIndex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn pair(a: BigUint, b: BigUint) -> BigUint {
    let s = &a + &b;
    (&s * (&s + 1u32)) / 2u32 + b
}

fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

fn encode_instruction(ins: &Instruction) -> BigUint {
    match *ins {
        Instruction::Halt => BigUint::zero(),
        Instruction::Inc(r) => BigUint::from(r) * 4u32 + 1u32,
        Instruction::Dec(r) => BigUint::from(r) * 4u32 + 2u32,
        Instruction::Jmp(l) => BigUint::from(l) * 4u32 + 3u32,
        Instruction::Jz(r, l) => pair(BigUint::from(r), BigUint::from(l)) * 4u32 + 4u32,
    }
}

/// Raw instruction with label left unreduced.
enum RawInstruction {
    Inc(u32),
    Dec(u32),
    Jz(u32, BigUint),
    Jmp(BigUint),
    Halt,
}

fn register(v: &BigUint) -> u32 {
    // Codes beyond the register cap wrap; such programs are not canonical.
    (v % (BigUint::one() << 32u32)).to_u32().unwrap_or(0)
}

fn decode_instruction(code: &BigUint) -> RawInstruction {
    if code.is_zero() {
        return RawInstruction::Halt;
    }
    let m = code - 1u32;
    let v = &m >> 2u32;
    match (&m & BigUint::from(3u32)).to_u32().unwrap_or(0) {
        0 => RawInstruction::Inc(register(&v)),
        1 => RawInstruction::Dec(register(&v)),
        2 => RawInstruction::Jmp(v),
        _ => {
            let (r, l) = unpair(&v);
            RawInstruction::Jz(register(&r), l)
        }
    }
}

pub fn encode(program: &MachineProgram) -> GodelIndex {
    let code = program
        .instructions()
        .iter()
        .rev()
        .fold(BigUint::zero(), |tail, ins| {
            pair(encode_instruction(ins), tail) + 1u32
        });
    GodelIndex(code)
}

/// Total decoding onto valid programs.
pub fn decode(index: &GodelIndex) -> MachineProgram {
    let mut raw = Vec::new();
    let mut rest = index.0.clone();
    while !rest.is_zero() {
        let (head, tail) = unpair(&(rest - 1u32));
        raw.push(decode_instruction(&head));
        rest = tail;
    }
    if raw.is_empty() {
        return MachineProgram::halt();
    }
    let len = BigUint::from(raw.len());
    let label = |l: BigUint| (l % &len).to_usize().expect("label below program length");
    let instructions = raw
        .into_iter()
        .map(|ins| match ins {
            RawInstruction::Inc(r) => Instruction::Inc(r),
            RawInstruction::Dec(r) => Instruction::Dec(r),
            RawInstruction::Jz(r, l) => Instruction::Jz(r, label(l)),
            RawInstruction::Jmp(l) => Instruction::Jmp(label(l)),
            RawInstruction::Halt => Instruction::Halt,
        })
        .collect();
    MachineProgram::new(instructions).expect("canonicalized program is valid")
}

/// The indexed family of programs `e -> φ_e` the dovetailers run.
///
/// Without plants, index `e` is the program decoded from code `e`. Planting a
/// program at index `e` places it there and shifts the canonical programs into
/// the remaining slots, so every canonical program still has an index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Numbering {
    plants: BTreeMap<u64, MachineProgram>,
}

impl Numbering {
    pub fn canonical() -> Self {
        Self::default()
    }

    pub fn with_plant(mut self, index: u64, program: MachineProgram) -> Self {
        self.plants.insert(index, program);
        self
    }

    /// Plant `programs` at indices `0, 1, 2, ...`.
    pub fn with_leading_plants(programs: impl IntoIterator<Item = MachineProgram>) -> Self {
        let plants = programs
            .into_iter()
            .enumerate()
            .map(|(i, p)| (i as u64, p))
            .collect();
        Self { plants }
    }

    pub fn plants(&self) -> impl Iterator<Item = (u64, &MachineProgram)> {
        self.plants.iter().map(|(i, p)| (*i, p))
    }

    pub fn program(&self, index: u64) -> MachineProgram {
        if let Some(p) = self.plants.get(&index) {
            return p.clone();
        }
        let below = self.plants.range(..index).count() as u64;
        decode(&GodelIndex::from(index - below))
    }
}
