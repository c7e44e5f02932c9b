//! The three sorites arguments run end to end over finite snapshots: the
//! discrete chain of heights, the continuous argument through the predicate
//! `Σ(x) := 0 ≤ x ∧ ∃n (x < s_n)`, and the covering argument through
//! `Π(x) := ∃n ([0, x] ⊆ O_0 ∪ ... ∪ O_(n-1))`.
//!
//! Verdicts on `Σ` and `Π` are three-valued. `True` carries a witness, `False`
//! carries the analytic bound that certifies it, and `Unknown` only records
//! that the budget ran out.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::covers::{creep, ChainStatus, ChainWalk, Cover, CoverKind};
use crate::creal::CompReal;
use crate::machine::Numbering;
use crate::measurement::{concat_powers, holder_phi, MeasurementStructure, PositiveRationals};
use crate::numerics::Rational;
use crate::specker::{specker_jump_ladder, EnumerationSource, JumpWitness, SpeckerSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArgumentKind {
    Discrete,
    Continuous,
    Covering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PremiseOutcome {
    Passed,
    Failed,
    /// The antecedent did not hold on the sample.
    Vacuous,
    /// Undecided within the budget.
    Unknown,
    /// Not represented at desk scale.
    Unmodeled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseCheck {
    pub premise: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Rational>,
    /// Budget or precision level the check ran at.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u64>,
    pub outcome: PremiseOutcome,
    pub detail: String,
}

impl PremiseCheck {
    fn new(premise: &str, point: Option<Rational>, precision: Option<u64>, outcome: PremiseOutcome, detail: String) -> Self {
        Self {
            premise: premise.to_owned(),
            point,
            precision,
            outcome,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Frontier of a stalled creeping chain.
    Gap(Rational),
    /// Horizon jumps of the live enumeration; may be empty when nothing
    /// planted halted within the budget.
    Jumps(Vec<JumpWitness>),
    /// A computable limit at which the strict inequality `x < s_n` fails.
    StrictBound { limit: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ParadoxDerived,
    BlockedAt { principle: String, evidence: Evidence },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifacts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_height: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossing_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frontier: Option<Rational>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub chain: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoritesReport {
    pub kind: ArgumentKind,
    pub premises: Vec<PremiseCheck>,
    pub verdict: Verdict,
    pub artifacts: Artifacts,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl fmt::Display for SoritesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ArgumentKind::Discrete => "discrete",
            ArgumentKind::Continuous => "continuous",
            ArgumentKind::Covering => "covering",
        };
        writeln!(f, "sorites: {kind}")?;
        match &self.verdict {
            Verdict::ParadoxDerived => writeln!(f, "verdict: paradox derived")?,
            Verdict::BlockedAt { principle, evidence } => {
                writeln!(f, "verdict: blocked at {principle}")?;
                match evidence {
                    Evidence::Gap(x) => writeln!(f, "evidence: gap at {x}")?,
                    Evidence::StrictBound { limit } => writeln!(f, "evidence: strict bound at {limit}")?,
                    Evidence::Jumps(ws) => {
                        writeln!(f, "evidence: {} jump witness(es)", ws.len())?;
                        for w in ws {
                            writeln!(
                                f,
                                "  program {} between budgets {} and {}: jump {} >= {}",
                                w.adversary, w.budget_before, w.budget_after, w.jump, w.lower_bound
                            )?;
                        }
                    }
                }
            }
        }
        let a = &self.artifacts;
        if let Some(h) = &a.final_height {
            writeln!(f, "final height: {h}")?;
        }
        if let Some(i) = a.crossing_index {
            writeln!(f, "foil crossing index: {i}")?;
        }
        if let Some(h) = &a.horizon {
            writeln!(f, "horizon: {h}")?;
        }
        if let Some(x) = &a.frontier {
            writeln!(f, "frontier: {x}")?;
        }
        if !a.chain.is_empty() {
            let chain: Vec<String> = a.chain.iter().map(usize::to_string).collect();
            writeln!(f, "chain: {}", chain.join(" "))?;
        }
        writeln!(f, "premises:")?;
        for p in &self.premises {
            let outcome = match p.outcome {
                PremiseOutcome::Passed => "passed",
                PremiseOutcome::Failed => "failed",
                PremiseOutcome::Vacuous => "vacuous",
                PremiseOutcome::Unknown => "unknown",
                PremiseOutcome::Unmodeled => "unmodeled",
            };
            write!(f, "  [{outcome}] {}", p.premise)?;
            if let Some(x) = &p.point {
                write!(f, " at {x}")?;
            }
            if let Some(b) = p.precision {
                write!(f, " (precision {b})")?;
            }
            writeln!(f, ": {}", p.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- discrete

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteSoritesSpec {
    pub start_height: Rational,
    pub increment: Rational,
    pub steps: u64,
    /// Cutoff of the classical foil `Φ₀(h) := h < threshold`.
    pub threshold: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("increment must be positive, got {0}")]
    NonPositiveIncrement(Rational),
    #[error("start height must be positive, got {0}")]
    NonPositiveStart(Rational),
    #[error("a chain needs at least one step")]
    NoSteps,
}

/// Build `a_(i+1) = a_i ∘ c` on the positive rationals, measure each `a_i`
/// in units of `c`, verify every tolerance premise, and chain them.
pub fn run_discrete(spec: &DiscreteSoritesSpec) -> Result<SoritesReport, HarnessError> {
    if !spec.increment.is_positive() {
        return Err(HarnessError::NonPositiveIncrement(spec.increment.clone()));
    }
    if !spec.start_height.is_positive() {
        return Err(HarnessError::NonPositiveStart(spec.start_height.clone()));
    }
    if spec.steps == 0 {
        return Err(HarnessError::NoSteps);
    }
    let q = PositiveRationals;
    let c = &spec.increment;
    // Level 0 suffices: the subunit is c itself, so consecutive measurements
    // differ by exactly one count.
    let measure = |a: &Rational| holder_phi(&q, a, c, c, 0, u64::MAX).expect("positive rationals are Archimedean");

    let mut elements = Vec::with_capacity(spec.steps as usize + 1);
    elements.push(spec.start_height.clone());
    for _ in 0..spec.steps {
        let next = q.concat(elements.last().expect("nonempty"), c);
        elements.push(next);
    }
    let heights: Vec<Rational> = elements.iter().map(measure).collect();

    let mut premises = Vec::new();
    let held = heights
        .windows(2)
        .filter(|w| (&w[1] - &w[0]).abs() <= *c)
        .count() as u64;
    premises.push(PremiseCheck::new(
        "tolerance |φ(a_i+1) - φ(a_i)| <= φ(c)",
        None,
        Some(0),
        if held == spec.steps { PremiseOutcome::Passed } else { PremiseOutcome::Failed },
        format!("{held} of {} steps", spec.steps),
    ));
    premises.push(PremiseCheck::new(
        "base Φ(a_0)",
        Some(spec.start_height.clone()),
        None,
        PremiseOutcome::Passed,
        "tolerant predicate holds at the start".into(),
    ));

    let crossing_index = elements.iter().position(|h| h >= &spec.threshold).map(|i| i as u64);
    let foil = match crossing_index {
        Some(0) => PremiseCheck::new(
            "foil base h < threshold",
            Some(elements[0].clone()),
            None,
            PremiseOutcome::Failed,
            format!("start is not below {}", spec.threshold),
        ),
        Some(i) => PremiseCheck::new(
            "foil conditional h_i < threshold -> h_i+1 < threshold",
            Some(elements[i as usize].clone()),
            None,
            PremiseOutcome::Failed,
            format!("breaks between steps {} and {i}", i - 1),
        ),
        None => PremiseCheck::new(
            "foil conditional h_i < threshold -> h_i+1 < threshold",
            None,
            None,
            PremiseOutcome::Passed,
            format!("never reaches {}", spec.threshold),
        ),
    };
    premises.push(foil);

    // The measurement counts whole units, so it is exact only on the grid
    // start + i·c when c divides the start; the chain itself is exact.
    let final_height = elements.last().expect("nonempty").clone();
    premises.push(PremiseCheck::new(
        "measured final height",
        Some(heights.last().expect("nonempty").clone()),
        Some(0),
        if heights.last() == elements.last() { PremiseOutcome::Passed } else { PremiseOutcome::Unknown },
        "φ(a_n) in units of c".into(),
    ));
    debug_assert_eq!(
        elements.last(),
        concat_powers(&q, c.clone()).nth(spec.steps as usize - 1).map(|n| &spec.start_height + n).as_ref()
    );
    Ok(SoritesReport {
        kind: ArgumentKind::Discrete,
        premises,
        verdict: Verdict::ParadoxDerived,
        artifacts: Artifacts {
            final_height: Some(final_height),
            crossing_index,
            ..Artifacts::default()
        },
        notes: vec![format!(
            "modus ponens along {} tolerance conditionals carries Φ from {} to the final height",
            spec.steps, spec.start_height
        )],
    })
}

// ---------------------------------------------------------------- continuous

/// `Σ` over a Specker sequence, optionally tied to the live enumeration it
/// was built from.
#[derive(Debug, Clone)]
pub struct SigmaPredicate {
    pub sequence: SpeckerSequence,
    live: Option<(Numbering, u64)>,
}

impl SigmaPredicate {
    pub fn new(sequence: SpeckerSequence) -> Self {
        Self { sequence, live: None }
    }

    /// Over the halting enumeration of `numbering` at dovetail `budget`.
    pub fn live(numbering: Numbering, budget: u64) -> Self {
        Self {
            sequence: SpeckerSequence::halting(&numbering, budget),
            live: Some((numbering, budget)),
        }
    }

    pub fn numbering(&self) -> Option<&Numbering> {
        self.live.as_ref().map(|(n, _)| n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaBound {
    Negative,
    /// `s_n < 1` for every `n`: the exponents `f(n) + 1` are distinct.
    AtLeastOne,
    /// A finite enumeration was scanned completely.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaVerdict {
    True { witness: usize },
    False { certified: SigmaBound },
    Unknown { budget: usize },
}

/// Scan `s_0..=s_(n_budget)` for a witness of `x < s_n`.
pub fn eval_sigma(p: &SigmaPredicate, x: &Rational, n_budget: usize) -> SigmaVerdict {
    if x.is_negative() {
        return SigmaVerdict::False { certified: SigmaBound::Negative };
    }
    if x >= &Rational::one() {
        return SigmaVerdict::False { certified: SigmaBound::AtLeastOne };
    }
    let seq = &p.sequence;
    let mut n = 0;
    while n <= n_budget {
        match seq.term(n) {
            Ok(s) if x < &s => return SigmaVerdict::True { witness: n },
            Ok(_) => n += 1,
            Err(_) => break,
        }
    }
    // A stub is all of f; a live snapshot only its budgeted prefix.
    let exhausted = matches!(seq.source(), EnumerationSource::Stub(v) if n >= v.len());
    if exhausted {
        SigmaVerdict::False { certified: SigmaBound::Exhausted }
    } else {
        SigmaVerdict::Unknown { budget: n_budget }
    }
}

fn two_pow_neg(k: u32) -> Rational {
    Rational::pow2_neg(k as u64)
}

/// Finite-sample ledger for the premises of the continuous argument:
/// openness and progressiveness of `Σ`, `LCC_sup` on the partial sums, and
/// `LCC_inf` on the reflected predicate `y ↦ Σ(1 - y)`.
pub fn check_continuous_premises(
    p: &SigmaPredicate,
    samples: &[Rational],
    k: u32,
    n_budget: usize,
) -> Vec<PremiseCheck> {
    let budget = Some(n_budget as u64);
    let mut ledger = Vec::new();
    let verdicts: Vec<SigmaVerdict> = samples.iter().map(|x| eval_sigma(p, x, n_budget)).collect();

    for (x, v) in samples.iter().zip(&verdicts) {
        let check = match v {
            SigmaVerdict::True { witness } => {
                let s = p.sequence.term(*witness).expect("witness term exists");
                let eps = &s - x;
                // Probe both ends of the ball, shrunk by 2^-k, inside [0, 1].
                let reach = &eps * (Rational::one() - two_pow_neg(k));
                let probes = [x - &reach, x + &reach];
                let ok = probes
                    .iter()
                    .filter(|y| !y.is_negative())
                    .all(|y| matches!(eval_sigma(p, y, n_budget), SigmaVerdict::True { .. }));
                PremiseCheck::new(
                    "open",
                    Some(x.clone()),
                    Some(k as u64),
                    if ok { PremiseOutcome::Passed } else { PremiseOutcome::Failed },
                    format!("epsilon {eps} from s_{witness} = {s}"),
                )
            }
            SigmaVerdict::False { .. } => {
                PremiseCheck::new("open", Some(x.clone()), Some(k as u64), PremiseOutcome::Vacuous, "Σ fails here".into())
            }
            SigmaVerdict::Unknown { .. } => {
                PremiseCheck::new("open", Some(x.clone()), budget, PremiseOutcome::Unknown, "no witness within budget".into())
            }
        };
        ledger.push(check);
    }

    for (x, v) in samples.iter().zip(&verdicts) {
        let below_true = samples
            .iter()
            .zip(&verdicts)
            .filter(|(y, _)| *y < x)
            .all(|(_, w)| matches!(w, SigmaVerdict::True { .. }));
        let (outcome, detail) = match (below_true, v) {
            (false, _) => (PremiseOutcome::Vacuous, "a sampled point below is not Σ".to_owned()),
            (true, SigmaVerdict::True { witness }) => (PremiseOutcome::Passed, format!("witness s_{witness}")),
            (true, SigmaVerdict::Unknown { .. }) => (PremiseOutcome::Unknown, "no witness within budget".to_owned()),
            (true, SigmaVerdict::False { certified }) => {
                (PremiseOutcome::Failed, format!("fails at the gap: certified false ({certified:?})"))
            }
        };
        ledger.push(PremiseCheck::new("progressive", Some(x.clone()), budget, outcome, detail));
    }

    let terms = p.sequence.terms_up_to(n_budget);
    if let Some(sup) = terms.last() {
        // Each s_n with n below the horizon is Σ by the next term; the
        // finite supremum is the horizon itself.
        let members = terms.len() - 1;
        let at_sup = eval_sigma(p, sup, n_budget);
        let outcome = match at_sup {
            SigmaVerdict::True { .. } => PremiseOutcome::Passed,
            SigmaVerdict::False { .. } => PremiseOutcome::Failed,
            SigmaVerdict::Unknown { .. } => PremiseOutcome::Unknown,
        };
        ledger.push(PremiseCheck::new(
            "LCC_sup on {s_n}",
            Some(sup.clone()),
            budget,
            outcome,
            format!("{members} member(s) below the horizon are Σ; Σ(sup) is {at_sup:?}"),
        ));
        let inf = Rational::one() - sup;
        let reflected = Rational::one() - &inf;
        let at_inf = eval_sigma(p, &reflected, n_budget);
        let outcome = match at_inf {
            SigmaVerdict::True { .. } => PremiseOutcome::Passed,
            SigmaVerdict::False { .. } => PremiseOutcome::Failed,
            SigmaVerdict::Unknown { .. } => PremiseOutcome::Unknown,
        };
        ledger.push(PremiseCheck::new(
            "LCC_inf on {1 - s_n} for y -> Σ(1 - y)",
            Some(inf),
            budget,
            outcome,
            format!("reflected predicate at the infimum is {at_inf:?}"),
        ));
    } else {
        ledger.push(PremiseCheck::new(
            "LCC_sup on {s_n}",
            None,
            budget,
            PremiseOutcome::Vacuous,
            "no partial sums within budget".into(),
        ));
    }

    ledger.push(PremiseCheck::new(
        "onto [0,1]",
        None,
        None,
        PremiseOutcome::Unmodeled,
        "no computable counterpart is modeled".into(),
    ));
    ledger
}

const DEFAULT_SAMPLES: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

/// The continuous argument: every finite premise check passes, yet the
/// supremum step needs a completeness principle the computable reals lack.
pub fn run_continuous(p: &SigmaPredicate, k: u32, n_budget: usize) -> SoritesReport {
    let samples: Vec<Rational> = DEFAULT_SAMPLES.iter().map(|&(a, b)| Rational::new(a, b)).collect();
    let mut premises = check_continuous_premises(p, &samples, k, n_budget);
    let horizon = p.sequence.terms_up_to(n_budget).last().cloned();
    let mut notes = Vec::new();

    // Trichotomy of the candidate supremum against 1 is only available as a
    // gap comparison of approximants.
    if let Some(h) = &horizon {
        let u = CompReal::from_rational(h.clone());
        let cmp = u.cmp_gap(&CompReal::from_rational(Rational::one()), k);
        premises.push(PremiseCheck::new(
            "trichotomy sup U vs 1",
            Some(h.clone()),
            Some(k as u64),
            PremiseOutcome::Unknown,
            format!("horizon only: {cmp:?}; the supremum itself has no code"),
        ));
    }

    let verdict = match (&p.live, p.sequence.source()) {
        (Some((numbering, budget)), _) => {
            let adversaries: Vec<u64> = numbering.plants().map(|(i, _)| i).collect();
            let witnesses = if n_budget == 0 {
                Vec::new()
            } else {
                specker_jump_ladder(numbering, &adversaries, *budget)
            };
            notes.push(format!(
                "{} planted program(s); {} halted within dovetail budget {budget}",
                adversaries.len(),
                witnesses.len()
            ));
            Verdict::BlockedAt {
                principle: "Dedekind completeness / ACA".into(),
                evidence: Evidence::Jumps(witnesses),
            }
        }
        (None, EnumerationSource::Identity) => {
            notes.push("f = identity has computable limit 1, so it is not a counterexample; Σ(1) stays certified false".into());
            Verdict::BlockedAt {
                principle: "strict inequality at 1".into(),
                evidence: Evidence::StrictBound { limit: Rational::one() },
            }
        }
        (None, _) => {
            let limit = p.sequence.horizon(usize::MAX);
            notes.push("a finite stub has a computable limit, so it is not a counterexample".into());
            Verdict::BlockedAt {
                principle: format!("strict inequality at {limit}"),
                evidence: Evidence::StrictBound { limit },
            }
        }
    };

    SoritesReport {
        kind: ArgumentKind::Continuous,
        premises,
        verdict,
        artifacts: Artifacts {
            horizon,
            ..Artifacts::default()
        },
        notes,
    }
}

// ---------------------------------------------------------------- covering

/// `Π` over a fixed cover snapshot.
#[derive(Debug, Clone)]
pub struct PiPredicate {
    pub cover: Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiBound {
    /// The whole singular cover has length at most 1/2.
    MeasureBound,
    /// An explicit cover was walked completely.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiVerdict {
    True { chain: Vec<usize> },
    False { certified: PiBound },
    Unknown { frontier: Rational },
}

fn pi_from_walk(p: &PiPredicate, walk: &ChainWalk, x: &Rational, m: usize, max_steps: usize) -> PiVerdict {
    if x.is_negative() {
        return PiVerdict::True { chain: Vec::new() };
    }
    if walk.reaches_past(x) {
        return PiVerdict::True { chain: walk.chain.clone() };
    }
    match p.cover.kind() {
        CoverKind::Singular { .. } if x > &Rational::new(1, 2) => PiVerdict::False { certified: PiBound::MeasureBound },
        CoverKind::Explicit if m >= p.cover.len() && max_steps >= p.cover.len() => {
            PiVerdict::False { certified: PiBound::Exhausted }
        }
        _ => PiVerdict::Unknown {
            frontier: walk.frontier.clone(),
        },
    }
}

/// `Π(x)` from the creeping chain over the first `m` intervals.
pub fn eval_pi(p: &PiPredicate, x: &Rational, m: usize, max_steps: usize) -> PiVerdict {
    let walk = creep(&p.cover, m, max_steps);
    pi_from_walk(p, &walk, x, m, max_steps)
}

/// `2 * pairs` points strictly inside `(lo, hi) ∩ (0, 1)`, paired up.
fn sample_pairs(lo: &Rational, hi: &Rational, pairs: usize) -> Vec<(Rational, Rational)> {
    let lo = lo.clone().max(Rational::zero());
    let hi = hi.clone().min(Rational::one());
    if lo >= hi {
        return Vec::new();
    }
    let width = &hi - &lo;
    let denom = 2 * pairs as i64 + 1;
    let point = |j: usize| &lo + &width * Rational::new(j as i64 + 1, denom);
    (0..pairs).map(|j| (point(2 * j), point(2 * j + 1))).collect()
}

/// The covering argument: `Π(0)` and congruence of `Π` on every chain
/// interval are checked; the chain then either reaches past 1 or stalls.
pub fn run_covering(p: &PiPredicate, m: usize, max_steps: usize, pairs_per_interval: usize) -> SoritesReport {
    let walk = creep(&p.cover, m, max_steps);
    let mut premises = Vec::new();
    let zero = Rational::zero();
    let at_zero = pi_from_walk(p, &walk, &zero, m, max_steps);
    premises.push(PremiseCheck::new(
        "base Π(0)",
        Some(zero),
        Some(m as u64),
        if matches!(at_zero, PiVerdict::True { .. }) { PremiseOutcome::Passed } else { PremiseOutcome::Unknown },
        format!("{at_zero:?}"),
    ));
    for &i in &walk.chain {
        let iv = &p.cover.intervals()[i];
        let pairs = sample_pairs(iv.lo(), iv.hi(), pairs_per_interval);
        let agree = pairs
            .iter()
            .filter(|(x, y)| pi_from_walk(p, &walk, x, m, max_steps) == pi_from_walk(p, &walk, y, m, max_steps))
            .count();
        premises.push(PremiseCheck::new(
            &format!("congruence on O_{i}"),
            None,
            Some(m as u64),
            if agree == pairs.len() { PremiseOutcome::Passed } else { PremiseOutcome::Failed },
            format!("{agree} of {} sampled pairs agree", pairs.len()),
        ));
    }
    let one = Rational::one();
    let at_one = pi_from_walk(p, &walk, &one, m, max_steps);
    premises.push(PremiseCheck::new(
        "conclusion Π(1)",
        Some(one),
        Some(m as u64),
        match at_one {
            PiVerdict::True { .. } => PremiseOutcome::Passed,
            PiVerdict::False { .. } => PremiseOutcome::Failed,
            PiVerdict::Unknown { .. } => PremiseOutcome::Unknown,
        },
        format!("{at_one:?}"),
    ));

    let verdict = match walk.status {
        ChainStatus::ReachedOne => Verdict::ParadoxDerived,
        ChainStatus::Stalled => Verdict::BlockedAt {
            principle: "Heine-Borel / WKL".into(),
            evidence: Evidence::Gap(walk.frontier.clone()),
        },
    };
    SoritesReport {
        kind: ArgumentKind::Covering,
        premises,
        verdict,
        artifacts: Artifacts {
            frontier: Some(walk.frontier.clone()),
            chain: walk.chain,
            ..Artifacts::default()
        },
        notes: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::MachineProgram;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn chain_spec(steps: u64) -> DiscreteSoritesSpec {
        DiscreteSoritesSpec {
            start_height: r(6, 5),
            increment: r(1, 1000),
            steps,
            threshold: r(9, 5),
        }
    }

    #[test]
    fn discrete_examples() {
        let report = run_discrete(&chain_spec(1000)).unwrap();
        assert_eq!(report.verdict, Verdict::ParadoxDerived);
        assert_eq!(report.artifacts.final_height, Some(r(11, 5)));
        assert_eq!(report.artifacts.crossing_index, Some(600));
        assert_eq!(report.premises[0].outcome, PremiseOutcome::Passed);

        let one = run_discrete(&chain_spec(1)).unwrap();
        assert_eq!(one.artifacts.final_height, Some(r(6, 5) + r(1, 1000)));
        assert_eq!(one.artifacts.crossing_index, None);

        assert_eq!(run_discrete(&chain_spec(0)), Err(HarnessError::NoSteps));
    }

    #[test]
    fn discrete_off_grid_start_keeps_tolerance() {
        let spec = DiscreteSoritesSpec {
            start_height: r(2, 3),
            increment: r(1, 7),
            steps: 50,
            threshold: r(5, 1),
        };
        let report = run_discrete(&spec).unwrap();
        assert_eq!(report.premises[0].outcome, PremiseOutcome::Passed);
    }

    #[test]
    fn sigma_examples() {
        let p = SigmaPredicate::new(SpeckerSequence::identity());
        assert_eq!(eval_sigma(&p, &r(0, 1), 0), SigmaVerdict::True { witness: 0 });
        assert_eq!(
            eval_sigma(&p, &r(1, 1), 1000),
            SigmaVerdict::False { certified: SigmaBound::AtLeastOne }
        );
        assert_eq!(eval_sigma(&p, &r(7, 8), 2), SigmaVerdict::Unknown { budget: 2 });
        assert_eq!(eval_sigma(&p, &r(7, 8), 3), SigmaVerdict::True { witness: 3 });
        assert_eq!(
            eval_sigma(&p, &r(-1, 8), 3),
            SigmaVerdict::False { certified: SigmaBound::Negative }
        );
        let stub = SigmaPredicate::new(SpeckerSequence::stub(vec![1, 0]).unwrap());
        assert_eq!(
            eval_sigma(&stub, &r(3, 4), 10),
            SigmaVerdict::False { certified: SigmaBound::Exhausted }
        );
    }

    #[test]
    fn premise_ledger_examples() {
        let p = SigmaPredicate::new(SpeckerSequence::identity());
        let ledger = check_continuous_premises(&p, &[r(1, 2)], 8, 2);
        assert_eq!(ledger[0].outcome, PremiseOutcome::Passed);
        assert_eq!(ledger[0].detail, "epsilon 1/4 from s_1 = 3/4");

        let ledger = check_continuous_premises(&p, &[r(1, 1)], 8, 2);
        assert_eq!(ledger[0].outcome, PremiseOutcome::Vacuous);

        let samples: Vec<Rational> = DEFAULT_SAMPLES.iter().map(|&(a, b)| r(a, b)).collect();
        let ledger = check_continuous_premises(&p, &samples, 8, 10);
        let prog: Vec<&PremiseCheck> = ledger.iter().filter(|c| c.premise == "progressive").collect();
        let failed: Vec<_> = prog.iter().filter(|c| c.outcome == PremiseOutcome::Failed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].point, Some(r(1, 1)));
        assert!(prog[..4].iter().all(|c| c.outcome == PremiseOutcome::Passed));
        assert!(ledger.iter().any(|c| c.outcome == PremiseOutcome::Unmodeled));
    }

    #[test]
    fn continuous_stub_blocks_at_one() {
        let p = SigmaPredicate::new(SpeckerSequence::identity());
        let report = run_continuous(&p, 10, 20);
        assert_eq!(
            report.verdict,
            Verdict::BlockedAt {
                principle: "strict inequality at 1".into(),
                evidence: Evidence::StrictBound { limit: r(1, 1) },
            }
        );
    }

    #[test]
    fn continuous_live_blocks_with_jump() {
        let numbering = Numbering::canonical().with_plant(0, MachineProgram::delay(1_000));
        let p = SigmaPredicate::live(numbering.clone(), 4_000_000);
        let report = run_continuous(&p, 10, 1_000);
        let Verdict::BlockedAt { principle, evidence: Evidence::Jumps(ws) } = &report.verdict else {
            panic!("unexpected verdict {:?}", report.verdict);
        };
        assert_eq!(principle, "Dedekind completeness / ACA");
        assert_eq!(ws.len(), 1);
        assert!(ws[0].jump >= r(1, 2));
        let replay = crate::specker::specker_jump_witness(&numbering, 0, ws[0].budget_before, ws[0].budget_after).unwrap();
        assert_eq!(replay, ws[0]);
    }

    #[test]
    fn continuous_with_zero_budget() {
        let numbering = Numbering::canonical().with_plant(0, MachineProgram::delay(1_000));
        let p = SigmaPredicate::live(numbering, 0);
        for x in [r(1, 4), r(1, 2), r(3, 4)] {
            assert_eq!(eval_sigma(&p, &x, 0), SigmaVerdict::Unknown { budget: 0 });
        }
        let report = run_continuous(&p, 10, 0);
        assert!(matches!(
            report.verdict,
            Verdict::BlockedAt { evidence: Evidence::Jumps(ref ws), .. } if ws.is_empty()
        ));
    }

    fn benign() -> PiPredicate {
        PiPredicate {
            cover: Cover::from_pairs([
                (r(-1, 10), r(3, 20)),
                (r(1, 10), r(7, 20)),
                (r(3, 10), r(11, 20)),
                (r(1, 2), r(3, 4)),
                (r(7, 10), r(21, 20)),
            ])
            .unwrap(),
        }
    }

    fn singular() -> PiPredicate {
        PiPredicate {
            cover: Cover::singular(&Numbering::canonical(), 200_000),
        }
    }

    #[test]
    fn pi_examples() {
        let p = singular();
        assert!(matches!(eval_pi(&p, &r(0, 1), 50, 50), PiVerdict::True { .. }));
        assert_eq!(
            eval_pi(&p, &r(3, 4), 50, 50),
            PiVerdict::False { certified: PiBound::MeasureBound }
        );
        let b = benign();
        assert!(matches!(eval_pi(&b, &r(1, 1), 5, 5), PiVerdict::True { .. }));
        assert_eq!(
            eval_pi(&b, &r(1, 1), 5, 2),
            PiVerdict::Unknown { frontier: r(7, 20) }
        );
    }

    #[test]
    fn covering_runs() {
        let report = run_covering(&singular(), 200, 200, 100);
        let Verdict::BlockedAt { principle, evidence: Evidence::Gap(x) } = &report.verdict else {
            panic!("unexpected verdict {:?}", report.verdict);
        };
        assert_eq!(principle, "Heine-Borel / WKL");
        assert!(x <= &r(1, 2));
        assert!(report
            .premises
            .iter()
            .filter(|c| c.premise.starts_with("congruence"))
            .all(|c| c.outcome == PremiseOutcome::Passed));

        let report = run_covering(&benign(), 5, 5, 100);
        assert_eq!(report.verdict, Verdict::ParadoxDerived);
        assert_eq!(report.artifacts.chain, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn report_renders() {
        let report = run_discrete(&chain_spec(3)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"final_height\":\"1203/1000\""));
        let back: SoritesReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(report.to_string().contains("verdict: paradox derived"));
    }

    proptest! {
        #[test]
        fn discrete_chain_exact(p in 1i64..5000, q in 1i64..100, dp in 1i64..50, dq in 1i64..100, steps in 1u64..200) {
            let spec = DiscreteSoritesSpec {
                start_height: r(p, q),
                increment: r(dp, dq),
                steps,
                threshold: r(1, 1),
            };
            let report = run_discrete(&spec).unwrap();
            let exact = r(p, q) + Rational::integer(steps as i64) * r(dp, dq);
            prop_assert_eq!(report.artifacts.final_height, Some(exact));
        }

        #[test]
        fn sigma_monotone_in_budget(num in 0i64..1000, b in 0usize..20, extra in 0usize..20) {
            let p = SigmaPredicate::new(SpeckerSequence::identity());
            let x = r(num, 1000);
            let small = eval_sigma(&p, &x, b);
            let large = eval_sigma(&p, &x, b + extra);
            match small {
                SigmaVerdict::True { .. } | SigmaVerdict::False { .. } => prop_assert_eq!(small, large),
                SigmaVerdict::Unknown { .. } => {
                    let flipped = matches!(large, SigmaVerdict::False { .. });
                    prop_assert!(!flipped);
                }
            }
        }

        #[test]
        fn sigma_downward_closed(num in 0i64..1000, other in 0i64..1000, b in 0usize..20) {
            let p = SigmaPredicate::new(SpeckerSequence::identity());
            let (x, y) = (r(num.max(other), 1000), r(num.min(other), 1000));
            if matches!(eval_sigma(&p, &x, b), SigmaVerdict::True { .. }) {
                let below = matches!(eval_sigma(&p, &y, b), SigmaVerdict::True { .. });
                prop_assert!(below);
            }
        }
    }
}
