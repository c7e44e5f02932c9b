//! Triangular dovetailing of program runs.
//!
//! Jobs `j0, j1, ...` are opened one per phase. Phase `t` opens job `t - 1`
//! and then advances every still-running job among the first `t` by a single
//! step, in opening order. Each step consumes one unit of the global budget,
//! so the state at budget `B` is a prefix of the state at any `B' >= B`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::godel::Numbering;
use super::program::{Compiled, Execution};

/// A run of program `index` on `input` that halted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltEvent {
    pub index: u64,
    pub input: u64,
    pub output: u64,
    pub steps: u64,
}

/// Supplies jobs in a fixed order.
trait JobSource {
    /// The next `(index, input)` pair, or `None` when the source is exhausted.
    fn next_job(&mut self) -> Option<(u64, u64)>;
}

struct Job {
    index: u64,
    input: u64,
    run: Execution,
    done: bool,
}

struct Dovetailer<S> {
    numbering: Numbering,
    source: S,
    live: Vec<Job>,
    cursor: usize,
    used: u64,
    compiled: HashMap<u64, Arc<Compiled>>,
}

impl<S: JobSource> Dovetailer<S> {
    fn new(numbering: Numbering, source: S) -> Self {
        Self {
            numbering,
            source,
            live: Vec::new(),
            cursor: 0,
            used: 0,
            compiled: HashMap::new(),
        }
    }

    /// Run until `budget` total steps have been spent, reporting halts in order.
    fn advance_to(&mut self, budget: u64, mut on_halt: impl FnMut(HaltEvent)) {
        while self.used < budget {
            if self.cursor >= self.live.len() {
                self.live.retain(|j| !j.done);
                self.cursor = 0;
                match self.source.next_job() {
                    Some((index, input)) => {
                        let program = self.program(index);
                        self.live.push(Job {
                            index,
                            input,
                            run: Execution::new(program, input),
                            done: false,
                        });
                    }
                    None if self.live.is_empty() => return,
                    None => {}
                }
                continue;
            }
            let job = &mut self.live[self.cursor];
            self.cursor += 1;
            if job.done {
                continue;
            }
            self.used += 1;
            if let Some(output) = job.run.step() {
                job.done = true;
                on_halt(HaltEvent {
                    index: job.index,
                    input: job.input,
                    output,
                    steps: job.run.steps,
                });
            }
        }
    }

    fn program(&mut self, index: u64) -> Arc<Compiled> {
        if let Some(p) = self.compiled.get(&index) {
            return p.clone();
        }
        // Only the most recent index is reopened by the sources here.
        self.compiled.clear();
        let p = Arc::new(Compiled::new(&self.numbering.program(index)));
        self.compiled.insert(index, p.clone());
        p
    }
}

struct InputZero {
    next: u64,
}

impl JobSource for InputZero {
    fn next_job(&mut self) -> Option<(u64, u64)> {
        let e = self.next;
        self.next = self.next.checked_add(1)?;
        Some((e, 0))
    }
}

/// Highest input at which program `e` must halt to be certified total: `2^(e+5)`.
pub fn totality_bound(e: u64) -> Option<u64> {
    1u64.checked_shl(u32::try_from(e.checked_add(5)?).ok()?)
}

/// The input whose output seeds the cover ball for program `e`: `2^(e+4)`.
pub fn probe_input(e: u64) -> Option<u64> {
    1u64.checked_shl(u32::try_from(e.checked_add(4)?).ok()?)
}

struct AllInputsUpToBound {
    index: u64,
    input: u64,
}

impl JobSource for AllInputsUpToBound {
    fn next_job(&mut self) -> Option<(u64, u64)> {
        let bound = totality_bound(self.index)?;
        if self.input > bound {
            self.index += 1;
            self.input = 0;
            totality_bound(self.index)?;
        }
        let job = (self.index, self.input);
        self.input += 1;
        Some(job)
    }
}

/// The 1-1 enumeration `f` of indices halting on input 0, as far as a budget
/// reveals it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltingEnumeration {
    /// `f(0), f(1), ...` in emission order.
    pub emitted: Vec<u64>,
    pub events: Vec<HaltEvent>,
    pub budget: u64,
}

impl HaltingEnumeration {
    pub fn f(&self, m: usize) -> Option<u64> {
        self.emitted.get(m).copied()
    }

    pub fn position(&self, index: u64) -> Option<usize> {
        self.emitted.iter().position(|&e| e == index)
    }

    pub fn len(&self) -> usize {
        self.emitted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitted.is_empty()
    }
}

/// Resumable dovetailer over all programs on input 0.
pub struct HaltingEnumerator {
    dovetailer: Dovetailer<InputZero>,
    events: Vec<HaltEvent>,
}

impl HaltingEnumerator {
    pub fn new(numbering: Numbering) -> Self {
        Self {
            dovetailer: Dovetailer::new(numbering, InputZero { next: 0 }),
            events: Vec::new(),
        }
    }

    pub fn advance_to(&mut self, budget: u64) -> &mut Self {
        let events = &mut self.events;
        self.dovetailer.advance_to(budget, |ev| events.push(ev));
        self
    }

    pub fn budget_used(&self) -> u64 {
        self.dovetailer.used
    }

    pub fn snapshot(&self) -> HaltingEnumeration {
        HaltingEnumeration {
            emitted: self.events.iter().map(|e| e.index).collect(),
            events: self.events.clone(),
            budget: self.dovetailer.used,
        }
    }
}

pub fn halting_enum(numbering: &Numbering, budget: u64) -> HaltingEnumeration {
    HaltingEnumerator::new(numbering.clone())
        .advance_to(budget)
        .snapshot()
}

/// Evidence that program `index` halted on every input `i <= 2^(index+5)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalityWitness {
    pub index: u64,
    pub runs: u64,
    /// Output and step count at input `2^(index+4)`.
    pub probe_output: u64,
    pub probe_steps: u64,
    pub max_steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalityEnumeration {
    /// `p_0, p_1, ...` in emission order.
    pub emitted: Vec<u64>,
    pub witnesses: Vec<TotalityWitness>,
    pub budget: u64,
}

#[derive(Default)]
struct Progress {
    remaining: u64,
    probe: Option<(u64, u64)>,
    max_steps: u64,
}

/// Resumable dovetailer over every program and every input up to its bound.
pub struct TotalityEnumerator {
    dovetailer: Dovetailer<AllInputsUpToBound>,
    progress: HashMap<u64, Progress>,
    witnesses: Vec<TotalityWitness>,
}

impl TotalityEnumerator {
    pub fn new(numbering: Numbering) -> Self {
        Self {
            dovetailer: Dovetailer::new(numbering, AllInputsUpToBound { index: 0, input: 0 }),
            progress: HashMap::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn advance_to(&mut self, budget: u64) -> &mut Self {
        let progress = &mut self.progress;
        let witnesses = &mut self.witnesses;
        self.dovetailer.advance_to(budget, |ev| {
            let bound = totality_bound(ev.index).expect("job was opened under its bound");
            let entry = progress.entry(ev.index).or_insert_with(|| Progress {
                remaining: bound + 1,
                ..Progress::default()
            });
            entry.remaining -= 1;
            entry.max_steps = entry.max_steps.max(ev.steps);
            if Some(ev.input) == probe_input(ev.index) {
                entry.probe = Some((ev.output, ev.steps));
            }
            if entry.remaining == 0 {
                let (probe_output, probe_steps) = entry.probe.expect("probe input lies below the bound");
                witnesses.push(TotalityWitness {
                    index: ev.index,
                    runs: bound + 1,
                    probe_output,
                    probe_steps,
                    max_steps: entry.max_steps,
                });
                progress.remove(&ev.index);
            }
        });
        self
    }

    pub fn snapshot(&self) -> TotalityEnumeration {
        TotalityEnumeration {
            emitted: self.witnesses.iter().map(|w| w.index).collect(),
            witnesses: self.witnesses.clone(),
            budget: self.dovetailer.used,
        }
    }
}

pub fn totality_enum(numbering: &Numbering, budget: u64) -> TotalityEnumeration {
    TotalityEnumerator::new(numbering.clone())
        .advance_to(budget)
        .snapshot()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::program::{MachineProgram, RunOutcome};
    use crate::machine::godel::{encode, decode, GodelIndex};

    #[test]
    fn zero_budget_is_empty() {
        assert!(halting_enum(&Numbering::canonical(), 0).is_empty());
        assert!(totality_enum(&Numbering::canonical(), 0).emitted.is_empty());
    }

    #[test]
    fn schedule_is_triangular() {
        // [HALT] sits at canonical index 0 and halts on its first step.
        let e = halting_enum(&Numbering::canonical(), 1);
        assert_eq!(e.emitted, vec![0]);
        assert_eq!(e.events[0].steps, 1);
    }

    #[test]
    fn halt_program_is_enumerated() {
        let g0 = encode(&MachineProgram::halt()).to_u64().unwrap();
        let e = halting_enum(&Numbering::canonical(), 10_000);
        assert!(e.position(g0).is_some());
    }

    #[test]
    fn enumeration_is_one_to_one_sound_and_monotone() {
        let numbering = Numbering::canonical();
        let small = halting_enum(&numbering, 20_000);
        let large = halting_enum(&numbering, 200_000);
        assert_eq!(&large.emitted[..small.len()], &small.emitted[..]);
        assert!(large.len() > small.len());
        let mut seen = std::collections::HashSet::new();
        for ev in &large.events {
            assert!(seen.insert(ev.index));
            let program = decode(&GodelIndex::from(ev.index));
            assert_eq!(
                program.run(0, ev.steps),
                RunOutcome::Halted { output: ev.output, steps: ev.steps }
            );
        }
        assert_eq!(halting_enum(&numbering, 200_000), large);
    }

    #[test]
    fn resumed_enumerator_matches_fresh_run() {
        let numbering = Numbering::canonical();
        let mut resumed = HaltingEnumerator::new(numbering.clone());
        for b in [10, 1_000, 5_000, 50_000] {
            resumed.advance_to(b);
            assert_eq!(resumed.snapshot(), halting_enum(&numbering, b));
        }
    }

    #[test]
    fn late_halting_program_appears_only_with_budget() {
        let numbering = Numbering::canonical().with_plant(3, MachineProgram::delay(10_000));
        let mut en = HaltingEnumerator::new(numbering);
        en.advance_to(100);
        assert!(en.snapshot().position(3).is_none());
        en.advance_to(10_000);
        assert!(en.snapshot().position(3).is_none());
        en.advance_to(100_000_000);
        let snap = en.snapshot();
        let m = snap.position(3).expect("delay program halts");
        assert_eq!(snap.events[m].steps, 10_000);
    }

    #[test]
    fn totality_bounds() {
        assert_eq!(totality_bound(0), Some(32));
        assert_eq!(probe_input(0), Some(16));
        assert_eq!(totality_bound(3), Some(256));
        assert_eq!(totality_bound(58), Some(1 << 63));
        assert_eq!(totality_bound(59), None);
    }

    #[test]
    fn straight_line_program_is_certified_total() {
        let numbering = Numbering::canonical().with_plant(1, MachineProgram::constant(4));
        let t = totality_enum(&numbering, 200_000);
        let w = t.witnesses.iter().find(|w| w.index == 1).expect("constant program is total");
        assert_eq!(w.runs, 65);
        assert_eq!(w.probe_output, 4);
        assert_eq!(w.probe_steps, 5);
        for i in 0..=totality_bound(1).unwrap() {
            assert!(matches!(numbering.program(1).run(i, 5), RunOutcome::Halted { .. }));
        }
    }

    #[test]
    fn divergent_program_never_certified() {
        let numbering = Numbering::canonical().with_plant(0, MachineProgram::diverge());
        for b in [1_000, 100_000, 2_000_000] {
            let t = totality_enum(&numbering, b);
            assert!(!t.emitted.contains(&0));
        }
    }

    #[test]
    fn totality_enumeration_is_deterministic_and_monotone() {
        let numbering = Numbering::canonical();
        let a = totality_enum(&numbering, 300_000);
        let b = totality_enum(&numbering, 1_000_000);
        assert_eq!(&b.emitted[..a.emitted.len()], &a.emitted[..]);
        assert_eq!(totality_enum(&numbering, 300_000), a);
        let mut seen = std::collections::HashSet::new();
        for w in &b.witnesses {
            assert!(seen.insert(w.index));
            let p = numbering.program(w.index);
            for i in 0..=totality_bound(w.index).unwrap() {
                assert!(matches!(p.run(i, w.max_steps), RunOutcome::Halted { .. }));
            }
        }
    }
}
