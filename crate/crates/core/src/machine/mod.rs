//! A small register machine, its canonical numbering, and dovetailed
//! enumerations of halting and (bounded) totality events.
//!
//! The halting enumeration lists the indices `e` whose program halts on
//! input 0, a c.e. set that is not decidable. The totality enumeration lists
//! the indices whose program halts on every input `i <= 2^(e+5)`.

mod dovetail;
mod godel;
mod program;

pub use dovetail::{
    halting_enum, probe_input, totality_bound, totality_enum, HaltEvent, HaltingEnumeration,
    HaltingEnumerator, TotalityEnumeration, TotalityEnumerator, TotalityWitness,
};
pub use godel::{decode, encode, GodelIndex, Numbering};
pub use program::{Instruction, MachineError, MachineProgram, RunOutcome, MAX_REGISTER};

pub fn run(program: &MachineProgram, input: u64, step_budget: u64) -> RunOutcome {
    program.run(input, step_budget)
}
