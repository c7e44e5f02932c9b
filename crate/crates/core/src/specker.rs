//! Specker sequences: `s_n = sum_{m <= n} 2^-(f(m)+1)` for a 1-1 enumeration `f`.
//!
//! The partial sums increase strictly and stay below 1, but when `f` lists a
//! non-decidable set the limit has no computable modulus. [`SpeckerSequence`]
//! therefore has no conversion into [`crate::creal::CompReal`]: the only access
//! to the limit is through finite horizons.

use std::collections::HashSet;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::machine::{HaltingEnumeration, HaltingEnumerator, Numbering};
use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpeckerError {
    #[error("term {requested} needs f({requested}), but only {available} values are enumerated{}",
        budget.map(|b| format!(" at budget {b}")).unwrap_or_default())]
    EnumerationExhausted {
        requested: usize,
        available: usize,
        budget: Option<u64>,
    },
    #[error("stub enumeration repeats the value {0}")]
    NotInjective(u64),
    #[error("reduction check failed for k = {k}: s_N - s_{n} < 2^-(k+1) yet f(i) != k for all i <= {n}")]
    CounterexampleDetected { k: u64, n: usize },
    #[error("no jump: {0}")]
    NoJump(String),
}

/// Where the values `f(0), f(1), ...` come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationSource {
    /// `f(m) = m`.
    Identity,
    /// A finite injective list.
    Stub(Vec<u64>),
    /// The halting enumeration as revealed by some budget.
    Halting(HaltingEnumeration),
}

#[derive(Debug)]
pub struct SpeckerSequence {
    source: EnumerationSource,
    sums: Mutex<Vec<Rational>>,
}

impl Clone for SpeckerSequence {
    fn clone(&self) -> Self {
        let sums = self.sums.lock().unwrap_or_else(|e| e.into_inner()).clone();
        Self {
            source: self.source.clone(),
            sums: Mutex::new(sums),
        }
    }
}

/// Outcome of asking whether `k` is enumerated by `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    In { witness: usize },
    NotInUpTo { scanned: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub k: u64,
    pub verdict: Membership,
}

/// Growth of the partial-sum horizon between two dovetail budgets, caused by
/// a program that halts only after the first budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpWitness {
    pub adversary: u64,
    /// Position `m` with `f(m) = adversary` in the larger enumeration.
    pub at_index: usize,
    pub budget_before: u64,
    pub budget_after: u64,
    pub horizon_before: Rational,
    pub horizon_after: Rational,
    pub jump: Rational,
    /// `2^-(adversary+1)`, which `jump` is certified to reach.
    pub lower_bound: Rational,
}

impl SpeckerSequence {
    pub fn new(source: EnumerationSource) -> Result<Self, SpeckerError> {
        if let EnumerationSource::Stub(values) = &source {
            let mut seen = HashSet::new();
            if let Some(v) = values.iter().find(|v| !seen.insert(**v)) {
                return Err(SpeckerError::NotInjective(*v));
            }
        }
        Ok(Self {
            source,
            sums: Mutex::new(Vec::new()),
        })
    }

    pub fn identity() -> Self {
        Self::new(EnumerationSource::Identity).expect("identity is injective")
    }

    pub fn stub(values: Vec<u64>) -> Result<Self, SpeckerError> {
        Self::new(EnumerationSource::Stub(values))
    }

    pub fn from_enumeration(enumeration: HaltingEnumeration) -> Self {
        Self::new(EnumerationSource::Halting(enumeration)).expect("dovetailer emits without repetition")
    }

    /// Over the live halting enumeration at `budget`.
    pub fn halting(numbering: &Numbering, budget: u64) -> Self {
        Self::from_enumeration(crate::machine::halting_enum(numbering, budget))
    }

    pub fn source(&self) -> &EnumerationSource {
        &self.source
    }

    pub fn f(&self, m: usize) -> Option<u64> {
        match &self.source {
            EnumerationSource::Identity => Some(m as u64),
            EnumerationSource::Stub(v) => v.get(m).copied(),
            EnumerationSource::Halting(e) => e.f(m),
        }
    }

    /// Number of defined values of `f`, or `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match &self.source {
            EnumerationSource::Identity => None,
            EnumerationSource::Stub(v) => Some(v.len()),
            EnumerationSource::Halting(e) => Some(e.len()),
        }
    }

    fn budget(&self) -> Option<u64> {
        match &self.source {
            EnumerationSource::Halting(e) => Some(e.budget),
            _ => None,
        }
    }

    /// `s_n`, exactly.
    pub fn term(&self, n: usize) -> Result<Rational, SpeckerError> {
        let mut sums = self.sums.lock().unwrap_or_else(|e| e.into_inner());
        while sums.len() <= n {
            let m = sums.len();
            let value = self.f(m).ok_or(SpeckerError::EnumerationExhausted {
                requested: n,
                available: m,
                budget: self.budget(),
            })?;
            let prev = sums.last().cloned().unwrap_or_else(Rational::zero);
            sums.push(add_dyadic_term(&prev, value + 1));
        }
        Ok(sums[n].clone())
    }

    /// Terms `s_0..=s_n` that exist, up to `n`.
    pub fn terms_up_to(&self, n: usize) -> Vec<Rational> {
        (0..=n).map_while(|i| self.term(i).ok()).collect()
    }

    /// The last partial sum among the first `count` terms (0 when there are none).
    pub fn horizon(&self, count: usize) -> Rational {
        let count = self.available().map_or(count, |a| a.min(count));
        match count {
            0 => Rational::zero(),
            c => self.term(c - 1).expect("term within available range"),
        }
    }

    /// Scan `f(0..n_budget)` for `k`. On a hit, the reduction is cross-checked
    /// against the scan horizon, see [`SpeckerSequence::reduction_violations`].
    pub fn membership(&self, k: u64, n_budget: usize) -> Result<MembershipVerdict, SpeckerError> {
        let scanned = self.available().map_or(n_budget, |a| a.min(n_budget));
        let verdict = match (0..scanned).find(|&m| self.f(m) == Some(k)) {
            Some(witness) => {
                if let Some(&n) = self.reduction_violations(k, scanned, k + 1).first() {
                    return Err(SpeckerError::CounterexampleDetected { k, n });
                }
                Membership::In { witness }
            }
            None => Membership::NotInUpTo { scanned },
        };
        Ok(MembershipVerdict { k, verdict })
    }

    /// Indices `n` below the horizon with `s_N - s_n < 2^-exponent` but no
    /// `i <= n` with `f(i) = k`, where `s_N` is the last of the first `count`
    /// terms and stands in for the limit.
    ///
    /// A value `k` enumerated after position `n` contributes `2^-(k+1)` to
    /// `s - s_n`, so `exponent = k + 1` never yields violations once `k` is
    /// inside the horizon. With `exponent = k` the implication can fail.
    pub fn reduction_violations(&self, k: u64, count: usize, exponent: u64) -> Vec<usize> {
        let count = self.available().map_or(count, |a| a.min(count));
        if count == 0 {
            return Vec::new();
        }
        let horizon = self.horizon(count);
        let threshold = Rational::pow2_neg(exponent);
        let mut seen = false;
        let mut out = Vec::new();
        for n in 0..count {
            seen |= self.f(n) == Some(k);
            let tail = &horizon - self.term(n).expect("within horizon");
            if tail < threshold && !seen {
                out.push(n);
            }
        }
        out
    }
}

/// `prev + 2^-exp` for dyadic `prev`, aligned on the larger exponent.
fn add_dyadic_term(prev: &Rational, exp: u64) -> Rational {
    let e = prev.dyadic_exponent().expect("partial sums are dyadic");
    let top = e.max(exp);
    let numer = (prev.numer() << (top - e)) + (num_bigint::BigInt::from(1) << (top - exp));
    Rational::dyadic(numer, top)
}

/// Compare the halting enumeration at two budgets and certify the horizon jump
/// caused by `adversary` halting between them.
pub fn specker_jump_witness(
    numbering: &Numbering,
    adversary: u64,
    budget_before: u64,
    budget_after: u64,
) -> Result<JumpWitness, SpeckerError> {
    if budget_after <= budget_before {
        return Err(SpeckerError::NoJump(format!(
            "budgets {budget_before} and {budget_after} do not increase"
        )));
    }
    let mut enumerator = HaltingEnumerator::new(numbering.clone());
    let before = enumerator.advance_to(budget_before).snapshot();
    if before.position(adversary).is_some() {
        return Err(SpeckerError::NoJump(format!(
            "program {adversary} already halted within budget {budget_before}"
        )));
    }
    let after = enumerator.advance_to(budget_after).snapshot();
    witness_between(adversary, before, after, budget_before, budget_after)
}

fn witness_between(
    adversary: u64,
    before: HaltingEnumeration,
    after: HaltingEnumeration,
    budget_before: u64,
    budget_after: u64,
) -> Result<JumpWitness, SpeckerError> {
    let at_index = after.position(adversary).ok_or_else(|| {
        SpeckerError::NoJump(format!(
            "program {adversary} has not halted within budget {budget_after}"
        ))
    })?;
    let horizon_before = SpeckerSequence::from_enumeration(before).horizon(usize::MAX);
    let horizon_after = SpeckerSequence::from_enumeration(after).horizon(usize::MAX);
    let jump = &horizon_after - &horizon_before;
    let lower_bound = Rational::pow2_neg(adversary + 1);
    debug_assert!(jump >= lower_bound);
    Ok(JumpWitness {
        adversary,
        at_index,
        budget_before,
        budget_after,
        horizon_before,
        horizon_after,
        jump,
        lower_bound,
    })
}

/// Jump witnesses for each of `adversaries` that halts within `budget`, each
/// bracketed by consecutive budgets of the ladder `0, 1, 2, 4, ..., budget`.
/// Every witness replays through [`specker_jump_witness`].
pub fn specker_jump_ladder(numbering: &Numbering, adversaries: &[u64], budget: u64) -> Vec<JumpWitness> {
    let mut enumerator = HaltingEnumerator::new(numbering.clone());
    let mut before = enumerator.advance_to(0).snapshot();
    let mut rung_before = 0;
    let mut pending: Vec<u64> = adversaries.to_vec();
    pending.retain(|e| before.position(*e).is_none());
    let mut out = Vec::new();
    let mut rung = 1u64;
    while rung_before < budget && !pending.is_empty() {
        let rung_after = rung.min(budget);
        let after = enumerator.advance_to(rung_after).snapshot();
        pending.retain(|&e| {
            if after.position(e).is_none() {
                return true;
            }
            out.extend(witness_between(e, before.clone(), after.clone(), rung_before, rung_after).ok());
            false
        });
        before = after;
        rung_before = rung_after;
        rung = rung.saturating_mul(2);
    }
    out.sort_by_key(|w| w.adversary);
    out
}
