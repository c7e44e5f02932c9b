//! Open rational intervals, coverings of `[0, 1]`, the singular cover, and the
//! chain walk that extracts a finite subcover when one exists.
//!
//! The singular cover places a ball `B(eta(φ_p(2^(p+4))), 2^-(p+3))` for every
//! index `p` certified total on inputs up to `2^(p+5)`. Its total length never
//! exceeds 1/2, so no finite part of it covers `[0, 1]`, even though every
//! computable real whose program is certified lands in some ball.

use serde::{Deserialize, Serialize};

use crate::machine::{probe_input, totality_bound, totality_enum, Numbering, RunOutcome};
use crate::numerics::{eta, Rational, RationalIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("interval ({lo}, {hi}) is empty")]
    EmptyInterval { lo: Rational, hi: Rational },
    #[error("insufficient budget: {found} intervals certified, {wanted} requested")]
    InsufficientBudget { found: usize, wanted: usize },
    #[error("program {index} violates the real-number convention at input {input}")]
    ConventionViolation { index: u64, input: u64 },
}

/// `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct OpenInterval {
    lo: Rational,
    hi: Rational,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: Rational,
    hi: Rational,
}

impl TryFrom<RawInterval> for OpenInterval {
    type Error = CoverError;
    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        OpenInterval::new(raw.lo, raw.hi)
    }
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, CoverError> {
        if lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(CoverError::EmptyInterval { lo, hi })
        }
    }

    /// The open ball `B(center, radius)`; `radius` must be positive.
    pub fn ball(center: &Rational, radius: &Rational) -> Result<Self, CoverError> {
        Self::new(center - radius, center + radius)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Is the open interval `other` a subset of `self`?
    pub fn includes(&self, other: &OpenInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Provenance of a singular-cover ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularSlot {
    pub program: u64,
    pub code: u64,
    pub center: Rational,
    pub radius: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverKind {
    Explicit,
    Singular { budget: u64, slots: Vec<SingularSlot> },
}

/// A finite snapshot of an enumerated covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    intervals: Vec<OpenInterval>,
    kind: CoverKind,
}

/// JSON row: `{"lo": "p/q", "hi": "p/q", "index": m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub lo: Rational,
    pub hi: Rational,
    pub index: usize,
}

impl Cover {
    pub fn explicit(intervals: Vec<OpenInterval>) -> Self {
        Self {
            intervals,
            kind: CoverKind::Explicit,
        }
    }

    /// Build from `(lo, hi)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, CoverError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let intervals = pairs
            .into_iter()
            .map(|(lo, hi)| OpenInterval::new(lo, hi))
            .collect::<Result<_, _>>()?;
        Ok(Self::explicit(intervals))
    }

    /// Every singular-cover ball certified within `budget` dovetail steps.
    pub fn singular(numbering: &Numbering, budget: u64) -> Self {
        let totality = totality_enum(numbering, budget);
        let mut intervals = Vec::with_capacity(totality.witnesses.len());
        let mut slots = Vec::with_capacity(totality.witnesses.len());
        for w in &totality.witnesses {
            let probe = probe_input(w.index).expect("certified index has a probe input");
            // Re-run the probe from scratch; certification bounds its running time.
            let code = match numbering.program(w.index).run(probe, w.probe_steps) {
                RunOutcome::Halted { output, .. } => output,
                RunOutcome::OutOfBudget => unreachable!("certified probe run halts"),
            };
            debug_assert_eq!(code, w.probe_output);
            let center = eta(RationalIndex(code));
            let radius = Rational::pow2_neg(w.index + 3);
            intervals.push(OpenInterval::ball(&center, &radius).expect("positive radius"));
            slots.push(SingularSlot {
                program: w.index,
                code,
                center,
                radius,
            });
        }
        Self {
            intervals,
            kind: CoverKind::Singular { budget, slots },
        }
    }

    /// The first `m` intervals, as a cover of the same kind.
    pub fn prefix(&self, m: usize) -> Result<Self, CoverError> {
        if m > self.intervals.len() {
            return Err(CoverError::InsufficientBudget {
                found: self.intervals.len(),
                wanted: m,
            });
        }
        let kind = match &self.kind {
            CoverKind::Explicit => CoverKind::Explicit,
            CoverKind::Singular { budget, slots } => CoverKind::Singular {
                budget: *budget,
                slots: slots[..m].to_vec(),
            },
        };
        Ok(Self {
            intervals: self.intervals[..m].to_vec(),
            kind,
        })
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.intervals
    }

    pub fn kind(&self) -> &CoverKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn entries(&self) -> Vec<CoverEntry> {
        self.intervals
            .iter()
            .enumerate()
            .map(|(index, iv)| CoverEntry {
                lo: iv.lo.clone(),
                hi: iv.hi.clone(),
                index,
            })
            .collect()
    }

    /// Explicit cover from JSON rows, ordered by their `index` field.
    pub fn from_entries(mut entries: Vec<CoverEntry>) -> Result<Self, CoverError> {
        entries.sort_by_key(|e| e.index);
        Self::from_pairs(entries.into_iter().map(|e| (e.lo, e.hi)))
    }

    fn first(&self, m: usize) -> &[OpenInterval] {
        &self.intervals[..m.min(self.intervals.len())]
    }
}

/// The first `m` singular-cover balls at a dovetail budget.
pub fn singular_cover(numbering: &Numbering, budget: u64, m: usize) -> Result<Cover, CoverError> {
    Cover::singular(numbering, budget).prefix(m)
}

/// Exact `sum_{i < m} (hi_i - lo_i)` over the available intervals.
pub fn total_length(cover: &Cover, m: usize) -> Rational {
    cover.first(m).iter().map(OpenInterval::length).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointCoverage {
    /// The ball of radius `2^-(z+4)` around the program's probe approximant
    /// lies inside interval `interval`.
    CoveredBy { interval: usize, ball: OpenInterval },
    NotFoundUpTo { searched: usize },
}

/// Locate the real computed by program `z` in the first `m` intervals.
///
/// The program must emit `eta`-codes of approximants within `1/i` of its real
/// at every input `i`, and must halt within `step_budget` on every input up
/// to `2^(z+5)`.
pub fn covers_point(
    cover: &Cover,
    numbering: &Numbering,
    z: u64,
    m: usize,
    step_budget: u64,
) -> Result<PointCoverage, CoverError> {
    let violation = |input| CoverError::ConventionViolation { index: z, input };
    let bound = totality_bound(z).ok_or(violation(u64::MAX))?;
    let probe = probe_input(z).ok_or(violation(u64::MAX))?;
    let program = numbering.program(z);
    let mut probe_code = None;
    for i in 0..=bound {
        match program.run(i, step_budget) {
            RunOutcome::Halted { output, .. } => {
                if i == probe {
                    probe_code = Some(output);
                }
            }
            RunOutcome::OutOfBudget => return Err(violation(i)),
        }
    }
    let center = eta(RationalIndex(probe_code.expect("probe input below the bound")));
    let ball = OpenInterval::ball(&center, &Rational::pow2_neg(z + 4)).expect("positive radius");
    let found = cover
        .first(m)
        .iter()
        .position(|iv| iv.includes(&ball));
    Ok(match found {
        Some(interval) => PointCoverage::CoveredBy { interval, ball },
        None => PointCoverage::NotFoundUpTo {
            searched: cover.first(m).len(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainStatus {
    ReachedOne,
    Stalled,
}

/// The creeping chain: each interval overlaps the reach of the previous ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainWalk {
    /// Cover indices in the order they were added.
    pub chain: Vec<usize>,
    /// `hi` of the last chain interval, capped at 1 (0 for an empty chain).
    pub frontier: Rational,
    pub status: ChainStatus,
}

impl ChainWalk {
    /// Check the certificate against the cover it was computed from:
    /// the first interval contains 0, consecutive intervals overlap, and the
    /// frontier is the capped `hi` of the last one.
    pub fn is_valid_for(&self, cover: &Cover) -> bool {
        let ivs: Vec<&OpenInterval> = match self
            .chain
            .iter()
            .map(|&i| cover.intervals.get(i))
            .collect::<Option<_>>()
        {
            Some(v) => v,
            None => return false,
        };
        let Some(first) = ivs.first() else {
            return self.frontier.is_zero() && self.status == ChainStatus::Stalled;
        };
        let zero = Rational::zero();
        let overlaps = ivs.windows(2).all(|w| w[1].lo < w[0].hi);
        let last_hi = &ivs[ivs.len() - 1].hi;
        let reached = last_hi > &Rational::one();
        let status_ok = reached == (self.status == ChainStatus::ReachedOne);
        first.contains(&zero)
            && overlaps
            && self.frontier == last_hi.clone().min(Rational::one())
            && status_ok
    }

    /// Is `[0, x]` inside the union of the chain?
    pub fn reaches_past(&self, x: &Rational) -> bool {
        !self.chain.is_empty() && x < &self.frontier
            || self.status == ChainStatus::ReachedOne && x <= &Rational::one()
    }
}

fn best_by_hi<'a>(
    candidates: impl Iterator<Item = (usize, &'a OpenInterval)>,
) -> Option<(usize, &'a OpenInterval)> {
    // Largest hi; the earliest index wins ties.
    candidates.fold(None, |best: Option<(usize, &OpenInterval)>, (i, iv)| match best {
        Some((_, b)) if b.hi >= iv.hi => best,
        _ => Some((i, iv)),
    })
}

/// Greedy creeping walk over the first `m` intervals, adding at most
/// `max_steps` intervals. Each step picks, among intervals that start before the
/// current frontier and extend it, the one reaching furthest.
pub fn creep(cover: &Cover, m: usize, max_steps: usize) -> ChainWalk {
    let intervals = cover.first(m);
    let zero = Rational::zero();
    let one = Rational::one();
    let mut chain = Vec::new();
    let mut reach = zero.clone();
    if max_steps > 0 {
        if let Some((i, iv)) = best_by_hi(intervals.iter().enumerate().filter(|(_, iv)| iv.contains(&zero))) {
            chain.push(i);
            reach = iv.hi.clone();
        }
    }
    while !chain.is_empty() && reach <= one && chain.len() < max_steps {
        let next = best_by_hi(
            intervals
                .iter()
                .enumerate()
                .filter(|(_, iv)| iv.lo < reach && iv.hi > reach),
        );
        match next {
            Some((i, iv)) => {
                chain.push(i);
                reach = iv.hi.clone();
            }
            None => break,
        }
    }
    let status = if reach > one {
        ChainStatus::ReachedOne
    } else {
        ChainStatus::Stalled
    };
    ChainWalk {
        chain,
        frontier: reach.min(one),
        status,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubcoverResult {
    Subcover(Vec<usize>),
    Gap(Rational),
}

/// A finite subcover of `[0, 1]` among the first `m` intervals, or the
/// frontier where the chain walk stalls.
pub fn finite_subcover(cover: &Cover, m: usize) -> SubcoverResult {
    let walk = creep(cover, m, m);
    match walk.status {
        ChainStatus::ReachedOne => SubcoverResult::Subcover(walk.chain),
        ChainStatus::Stalled => SubcoverResult::Gap(walk.frontier),
    }
}
