//! Ordered, positive, regular, Archimedean semigroups and the constructive
//! measurement homomorphism into the positive reals.
//!
//! For a unit `c` with subunits `u_0 = c`, `u_(k+1) ∘ u_(k+1) ⪯ u_k`, the value
//! of an element `a` is approximated by `N(u_k, a) / N(u_k, c)`, where
//! `N(b, a)` is the least `n` such that `n + 1` copies of `b` exceed `a`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::creal::CompReal;
use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasurementError {
    #[error("no Archimedean witness within {budget} copies")]
    ArchimedeanBudgetExceeded { budget: u64 },
    #[error("no subunit found at level {level}")]
    NoSubunitFound { level: usize },
    #[error("{0} is not an element of the structure")]
    NotInStructure(String),
}

/// A carrier with concatenation `∘` and strict order `≺`.
pub trait MeasurementStructure {
    type Element: Clone + fmt::Debug;

    fn name(&self) -> &str;

    fn concat(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn less(&self, a: &Self::Element, b: &Self::Element) -> bool;

    /// `a ∼ b`: neither precedes the other.
    fn same_magnitude(&self, a: &Self::Element, b: &Self::Element) -> bool {
        !self.less(a, b) && !self.less(b, a)
    }

    /// `a ⪯ b`.
    fn less_or_same(&self, a: &Self::Element, b: &Self::Element) -> bool {
        !self.less(b, a)
    }

    fn contains(&self, _a: &Self::Element) -> bool {
        true
    }

    /// Some `u` with `u ∘ u ⪯ a`, if the structure can produce one.
    fn subunit(&self, _a: &Self::Element) -> Option<Self::Element> {
        None
    }

    /// Some `z` with `x ∘ z ⪯ y`, for `x ≺ y`.
    fn regular_witness(&self, _x: &Self::Element, _y: &Self::Element) -> Option<Self::Element> {
        None
    }
}

/// Structures whose subunit is an exact half: `u ∘ u ∼ a`.
pub trait ExactHalving: MeasurementStructure {
    fn half(&self, a: &Self::Element) -> Self::Element;
}

/// Positive rationals under `+` and `<`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PositiveRationals;

/// Positive dyadic rationals under `+` and `<`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PositiveDyadics;

impl MeasurementStructure for PositiveRationals {
    type Element = Rational;

    fn name(&self) -> &str {
        "qplus"
    }
    fn concat(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn less(&self, a: &Rational, b: &Rational) -> bool {
        a < b
    }
    fn contains(&self, a: &Rational) -> bool {
        a.is_positive()
    }
    fn subunit(&self, a: &Rational) -> Option<Rational> {
        Some(self.half(a))
    }
    fn regular_witness(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        (x < y).then(|| y - x)
    }
}

impl ExactHalving for PositiveRationals {
    fn half(&self, a: &Rational) -> Rational {
        a * Rational::new(1, 2)
    }
}

impl MeasurementStructure for PositiveDyadics {
    type Element = Rational;

    fn name(&self) -> &str {
        "dyadic"
    }
    fn concat(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn less(&self, a: &Rational, b: &Rational) -> bool {
        a < b
    }
    fn contains(&self, a: &Rational) -> bool {
        a.is_positive() && a.is_dyadic()
    }
    fn subunit(&self, a: &Rational) -> Option<Rational> {
        Some(self.half(a))
    }
    fn regular_witness(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        (x < y).then(|| y - x)
    }
}

impl ExactHalving for PositiveDyadics {
    fn half(&self, a: &Rational) -> Rational {
        a * Rational::new(1, 2)
    }
}

/// A structure whose subunits and regularity witnesses are searched for in a
/// finite batch of elements instead of being computed.
#[derive(Debug, Clone)]
pub struct SearchStructure<S: MeasurementStructure> {
    pub inner: S,
    pub batch: Vec<S::Element>,
}

impl<S: MeasurementStructure> MeasurementStructure for SearchStructure<S> {
    type Element = S::Element;

    fn name(&self) -> &str {
        self.inner.name()
    }
    fn concat(&self, a: &S::Element, b: &S::Element) -> S::Element {
        self.inner.concat(a, b)
    }
    fn less(&self, a: &S::Element, b: &S::Element) -> bool {
        self.inner.less(a, b)
    }
    fn contains(&self, a: &S::Element) -> bool {
        self.inner.contains(a)
    }
    /// The largest batch element `u` with `u ∘ u ⪯ a`.
    fn subunit(&self, a: &S::Element) -> Option<S::Element> {
        self.batch
            .iter()
            .filter(|u| self.less_or_same(&self.concat(u, u), a))
            .fold(None, |best: Option<&S::Element>, u| match best {
                Some(b) if !self.less(b, u) => Some(b),
                _ => Some(u),
            })
            .cloned()
    }
    fn regular_witness(&self, x: &S::Element, y: &S::Element) -> Option<S::Element> {
        self.batch
            .iter()
            .find(|z| self.less_or_same(&self.concat(x, z), y))
            .cloned()
    }
}

/// `b ∘ b ∘ ... ∘ b` with `n >= 1` copies, by repeated doubling.
pub fn concat_power<S: MeasurementStructure>(s: &S, b: &S::Element, n: u64) -> S::Element {
    assert!(n >= 1, "a concatenation needs at least one copy");
    let mut acc: Option<S::Element> = None;
    let mut square = b.clone();
    let mut rest = n;
    loop {
        if rest & 1 == 1 {
            acc = Some(match acc {
                None => square.clone(),
                Some(a) => s.concat(&a, &square),
            });
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        square = s.concat(&square, &square);
    }
    acc.expect("n >= 1")
}

/// The sequence `c, c ∘ c, c ∘ (c ∘ c), ...` used by the discrete chain.
pub fn concat_powers<S: MeasurementStructure>(
    s: &S,
    c: S::Element,
) -> impl Iterator<Item = S::Element> + '_ {
    let unit = c.clone();
    std::iter::successors(Some(c), move |prev| Some(s.concat(&unit, prev)))
}

/// `N(b, a)`: the least `n` such that `n + 1` copies of `b` exceed `a`,
/// searched among `n <= budget`.
pub fn n_count<S: MeasurementStructure>(
    s: &S,
    b: &S::Element,
    a: &S::Element,
    budget: u64,
) -> Result<u64, MeasurementError> {
    // Powers b^(2^j) until one exceeds a, then the largest count c with
    // b^c ⪯ a is assembled bit by bit from the top; N(b, a) = c.
    let mut doublings = vec![b.clone()];
    while s.less_or_same(doublings.last().expect("nonempty"), a) {
        let j = doublings.len() as u32;
        if j >= 63 || (1u64 << j) > budget.saturating_add(1) {
            return Err(MeasurementError::ArchimedeanBudgetExceeded { budget });
        }
        let top = doublings.last().expect("nonempty");
        doublings.push(s.concat(top, top));
    }
    let mut count: u64 = 0;
    let mut acc: Option<S::Element> = None;
    for (j, power) in doublings.iter().enumerate().rev() {
        let candidate = match &acc {
            None => power.clone(),
            Some(a_) => s.concat(a_, power),
        };
        if s.less_or_same(&candidate, a) {
            acc = Some(candidate);
            count += 1u64 << j;
        }
    }
    if count > budget {
        return Err(MeasurementError::ArchimedeanBudgetExceeded { budget });
    }
    Ok(count)
}

/// `u_0, u_1, ...` with `u_(k+1) ∘ u_(k+1) ⪯ u_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubunitChain<E> {
    pub levels: Vec<E>,
}

impl<E: Clone + fmt::Debug> SubunitChain<E> {
    pub fn satisfies_halving<S: MeasurementStructure<Element = E>>(&self, s: &S) -> bool {
        self.levels
            .windows(2)
            .all(|w| s.less_or_same(&s.concat(&w[1], &w[1]), &w[0]))
    }
}

/// The subunit chain from `u` down to level `k`.
pub fn subunits<S: MeasurementStructure>(
    s: &S,
    u: &S::Element,
    k: usize,
) -> Result<SubunitChain<S::Element>, MeasurementError> {
    let mut levels = vec![u.clone()];
    for level in 1..=k {
        let prev = &levels[level - 1];
        let next = s
            .subunit(prev)
            .filter(|v| s.contains(v) && s.less_or_same(&s.concat(v, v), prev))
            .ok_or(MeasurementError::NoSubunitFound { level })?;
        levels.push(next);
    }
    Ok(SubunitChain { levels })
}

/// `r · N(u_k, a) / N(u_k, c)` with subunits of the unit `c`.
pub fn holder_phi<S: MeasurementStructure>(
    s: &S,
    a: &S::Element,
    c: &S::Element,
    r: &Rational,
    k: usize,
    budget: u64,
) -> Result<Rational, MeasurementError> {
    for x in [a, c] {
        if !s.contains(x) {
            return Err(MeasurementError::NotInStructure(format!("{x:?}")));
        }
    }
    let chain = subunits(s, c, k)?;
    let u_k = &chain.levels[k];
    let num = n_count(s, u_k, a, budget)?;
    let den = n_count(s, u_k, c, budget)?;
    Ok(r * Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Index shift that turns `holder_phi` approximants into a coded real:
/// one level, plus enough to absorb the scale `r`.
pub fn holder_shift(r: &Rational) -> u32 {
    1 + u32::try_from(r.ceil_log2_abs()).expect("scale too large")
}

/// `φ(a)` as a coded real, normalized by `φ(c) = r`. Level `k` is
/// `holder_phi` at level `k + holder_shift(r)`.
pub fn holder_phi_real<S>(
    s: Arc<S>,
    a: S::Element,
    c: S::Element,
    r: Rational,
) -> Result<CompReal, MeasurementError>
where
    S: ExactHalving + Send + Sync + 'static,
    S::Element: Send + Sync + 'static,
{
    let shift = holder_shift(&r);
    // Fail early on elements outside the structure; deeper levels then
    // cannot fail since halving is exact and the budget is unbounded.
    holder_phi(&*s, &a, &c, &r, shift as usize, u64::MAX)?;
    Ok(CompReal::from_fn(move |k| {
        holder_phi(&*s, &a, &c, &r, (k + shift) as usize, u64::MAX)
            .expect("exact halving yields subunits at every level")
    }))
}

/// A pair that failed a homomorphism check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation<E> {
    pub a: E,
    pub b: E,
    pub property: &'static str,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairResidual<E> {
    pub a: E,
    pub b: E,
    /// `|φ_k(a ∘ b) - (φ_k(a) + φ_k(b))|`.
    pub additivity: Rational,
    /// `φ_k(b) + 2^(2-k) - φ_k(a)` when `a ≺ b`; must be positive.
    pub order_margin: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismReport<E> {
    pub k: u32,
    pub additivity_tolerance: Rational,
    pub order_tolerance: Rational,
    pub residuals: Vec<PairResidual<E>>,
    pub violations: Vec<Violation<E>>,
}

fn two_pow_signed(exp: i64) -> Rational {
    if exp >= 0 {
        Rational::pow2(exp as u64)
    } else {
        Rational::pow2_neg((-exp) as u64)
    }
}

/// Sample additivity and order preservation of level-`k` approximants `phi`,
/// each assumed within `2^(1-k)` of its limit.
pub fn check_homomorphism<S, F>(
    s: &S,
    phi: F,
    pairs: &[(S::Element, S::Element)],
    k: u32,
) -> HomomorphismReport<S::Element>
where
    S: MeasurementStructure,
    F: Fn(&S::Element, u32) -> Rational,
{
    let additivity_tolerance = Rational::integer(3) * two_pow_signed(1 - k as i64);
    let order_tolerance = two_pow_signed(2 - k as i64);
    let mut residuals = Vec::with_capacity(pairs.len());
    let mut violations = Vec::new();
    for (a, b) in pairs {
        let pa = phi(a, k);
        let pb = phi(b, k);
        let pab = phi(&s.concat(a, b), k);
        let additivity = (&pab - (&pa + &pb)).abs();
        if additivity > additivity_tolerance {
            violations.push(Violation {
                a: a.clone(),
                b: b.clone(),
                property: "additivity",
                residual: additivity.clone(),
            });
        }
        let order_margin = s.less(a, b).then(|| &pb + &order_tolerance - &pa);
        if let Some(margin) = &order_margin {
            if !margin.is_positive() {
                violations.push(Violation {
                    a: a.clone(),
                    b: b.clone(),
                    property: "order",
                    residual: margin.clone(),
                });
            }
        }
        residuals.push(PairResidual {
            a: a.clone(),
            b: b.clone(),
            additivity,
            order_margin,
        });
    }
    HomomorphismReport {
        k,
        additivity_tolerance,
        order_tolerance,
        residuals,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarResidual<E> {
    pub a: E,
    pub residual: Rational,
    pub tolerance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarReport<E> {
    pub k: u32,
    /// `ψ_k(a_0) / φ_k(a_0)` at the first sample with nonzero `φ_k`.
    pub v: Option<Rational>,
    pub residuals: Vec<ScalarResidual<E>>,
    pub violations: usize,
}

/// Compare the measurements normalized by `(c1, r1)` and `(c2, r2)`: estimate
/// the ratio `v` from one sample and check `ψ ≈ v φ` on the others.
pub fn check_scalar_uniqueness<S>(
    s: Arc<S>,
    (c1, r1): (S::Element, Rational),
    (c2, r2): (S::Element, Rational),
    samples: &[S::Element],
    k: u32,
) -> Result<ScalarReport<S::Element>, MeasurementError>
where
    S: ExactHalving + Send + Sync + 'static,
    S::Element: Send + Sync + 'static,
{
    let mut pairs = Vec::with_capacity(samples.len());
    for a in samples {
        let phi = holder_phi_real(s.clone(), a.clone(), c1.clone(), r1.clone())?.approx(k);
        let psi = holder_phi_real(s.clone(), a.clone(), c2.clone(), r2.clone())?.approx(k);
        pairs.push((a.clone(), phi, psi));
    }
    let err = two_pow_signed(1 - k as i64);
    let Some(anchor) = pairs.iter().position(|(_, phi, _)| phi > &err) else {
        return Ok(ScalarReport { k, v: None, residuals: Vec::new(), violations: 0 });
    };
    let (_, phi0, psi0) = &pairs[anchor];
    let v = psi0 / phi0;
    // |v_hat - v| <= (err + v err) / (phi0 - err), with v <= v_hat + delta.
    let delta = {
        let denom = phi0 - &err;
        let num = &err * (Rational::one() + &v);
        let d0 = &num / &denom;
        &err * (Rational::one() + &v + &d0) / &denom
    };
    let mut residuals = Vec::new();
    let mut violations = 0;
    for (i, (a, phi, psi)) in pairs.iter().enumerate() {
        if i == anchor {
            continue;
        }
        let residual = (psi - &v * phi).abs();
        let tolerance = &err * (Rational::one() + &v + &delta) + &delta * phi.abs();
        if residual > tolerance {
            violations += 1;
        }
        residuals.push(ScalarResidual {
            a: a.clone(),
            residual,
            tolerance,
        });
    }
    Ok(ScalarReport {
        k,
        v: Some(v),
        residuals,
        violations,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

/// Sample-check the structure axioms on triples drawn deterministically from
/// `batch`.
pub fn check_axioms<S: MeasurementStructure>(
    s: &S,
    batch: &[S::Element],
    archimedean_budget: u64,
) -> AxiomReport {
    let n = batch.len();
    let mut report = AxiomReport::default();
    let mut fail = |axiom: &str, items: &[&S::Element]| {
        report.failures.push(format!("{axiom}: {items:?}"));
    };
    for i in 0..n {
        let x = &batch[i];
        let y = &batch[(i * 31 + 7) % n];
        let z = &batch[(i * 17 + 11) % n];
        let le = |a: &S::Element, b: &S::Element| s.less_or_same(a, b);

        let relations = [s.less(x, y), s.less(y, x), s.same_magnitude(x, y)];
        if relations.iter().filter(|r| **r).count() != 1 {
            fail("linearity", &[x, y]);
        }
        if s.less(x, y) && s.less(y, z) && !s.less(x, z) {
            fail("transitivity", &[x, y, z]);
        }
        let left = s.concat(&s.concat(x, y), z);
        let right = s.concat(x, &s.concat(y, z));
        if !s.same_magnitude(&left, &right) {
            fail("associativity", &[x, y, z]);
        }
        if le(x, y) && !(le(&s.concat(z, x), &s.concat(z, y)) && le(&s.concat(x, z), &s.concat(y, z))) {
            fail("monotonicity", &[x, y, z]);
        }
        if !s.less(x, &s.concat(x, y)) {
            fail("positivity", &[x, y]);
        }
        if s.less(x, y) {
            let ok = s
                .regular_witness(x, y)
                .is_some_and(|w| s.contains(&w) && le(&s.concat(x, &w), y));
            if !ok {
                fail("regularity", &[x, y]);
            }
        }
        if n_count(s, x, y, archimedean_budget).is_err() {
            fail("archimedean", &[x, y]);
        }
    }
    report.triples_checked = n;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    const Q: PositiveRationals = PositiveRationals;

    #[test]
    fn n_count_examples() {
        assert_eq!(n_count(&Q, &r(1, 4), &r(3, 1), 1_000).unwrap(), 12);
        assert_eq!(n_count(&Q, &r(2, 7), &r(2, 7), 1_000).unwrap(), 1);
        assert_eq!(n_count(&Q, &r(1, 1), &r(1, 2), 1_000).unwrap(), 0);
        assert_eq!(
            n_count(&Q, &r(1, 1000), &r(5, 1), 100),
            Err(MeasurementError::ArchimedeanBudgetExceeded { budget: 100 })
        );
    }

    #[test]
    fn n_count_matches_linear_scan() {
        // Oracle: add copies of b one at a time.
        for (bp, bq, ap, aq) in [(1, 3, 7, 2), (2, 5, 2, 5), (3, 7, 100, 9), (5, 1, 1, 9)] {
            let (b, a) = (r(bp, bq), r(ap, aq));
            let mut n = 0u64;
            let mut total = b.clone();
            while total <= a {
                total = &total + &b;
                n += 1;
            }
            assert_eq!(n_count(&Q, &b, &a, u64::MAX).unwrap(), n);
        }
    }

    #[test]
    fn concat_helpers() {
        assert_eq!(concat_power(&Q, &r(1, 3), 7), r(7, 3));
        let powers: Vec<_> = concat_powers(&Q, r(1, 1000)).take(3).collect();
        assert_eq!(powers, vec![r(1, 1000), r(2, 1000), r(3, 1000)]);
    }

    #[test]
    fn subunit_examples() {
        let chain = subunits(&Q, &r(1, 1), 6).unwrap();
        for (k, u) in chain.levels.iter().enumerate() {
            assert_eq!(u, &Rational::pow2_neg(k as u64));
        }
        assert!(chain.satisfies_halving(&Q));
        let dy = subunits(&PositiveDyadics, &r(1, 2), 5).unwrap();
        for (k, u) in dy.levels.iter().enumerate() {
            assert_eq!(u, &Rational::pow2_neg(k as u64 + 1));
        }
        let search = SearchStructure {
            inner: PositiveRationals,
            batch: vec![r(1, 1), r(3, 4)],
        };
        assert_eq!(
            subunits(&search, &r(1, 1), 2),
            Err(MeasurementError::NoSubunitFound { level: 1 })
        );
        let search = SearchStructure {
            inner: PositiveRationals,
            batch: vec![r(1, 3), r(1, 9), r(1, 2)],
        };
        let chain = subunits(&search, &r(1, 1), 2).unwrap();
        assert_eq!(chain.levels, vec![r(1, 1), r(1, 2), r(1, 9)]);
    }

    #[test]
    fn holder_examples() {
        for k in 0..12 {
            assert_eq!(holder_phi(&Q, &r(3, 1), &r(1, 1), &r(1, 1), k, u64::MAX).unwrap(), r(3, 1));
            assert_eq!(holder_phi(&Q, &r(5, 7), &r(5, 7), &r(4, 9), k, u64::MAX).unwrap(), r(4, 9));
        }
        for k in 1..12 {
            assert_eq!(holder_phi(&Q, &r(1, 2), &r(1, 1), &r(2, 1), k, u64::MAX).unwrap(), r(1, 1));
        }
        assert!(matches!(
            holder_phi(&PositiveDyadics, &r(1, 3), &r(1, 1), &r(1, 1), 2, 100),
            Err(MeasurementError::NotInStructure(_))
        ));
    }

    #[test]
    fn holder_real_obeys_modulus() {
        for (a, c, scale) in [(r(3, 1), r(1, 1), r(1, 1)), (r(1, 3), r(1, 1), r(1, 1)), (r(22, 7), r(2, 3), r(9, 2))] {
            let x = holder_phi_real(Arc::new(PositiveRationals), a.clone(), c.clone(), scale.clone()).unwrap();
            x.check_modulus(30).unwrap();
            let exact = &scale * &a / &c;
            assert!((x.approx(30) - exact).abs() <= Rational::pow2_neg(29));
        }
    }

    #[test]
    fn homomorphism_exact_on_dyadics() {
        let pairs = vec![(r(1, 4), r(3, 8)), (r(5, 2), r(1, 16)), (r(7, 8), r(7, 8))];
        let q = Arc::new(PositiveRationals);
        let phi = |a: &Rational, k: u32| {
            holder_phi_real(q.clone(), a.clone(), r(1, 1), r(1, 1)).unwrap().approx(k)
        };
        let report = check_homomorphism(&Q, phi, &pairs, 10);
        assert!(report.violations.is_empty());
        assert!(report.residuals.iter().all(|p| p.additivity.is_zero()));
        assert!(check_homomorphism(&Q, phi, &[], 10).residuals.is_empty());
    }

    #[test]
    fn corrupted_measure_is_flagged_at_fine_levels() {
        let q = Arc::new(PositiveRationals);
        let bad = r(1, 4);
        let phi = |a: &Rational, k: u32| {
            let v = holder_phi_real(q.clone(), a.clone(), r(1, 1), r(1, 1)).unwrap().approx(k);
            if a == &bad { v + r(1, 8) } else { v }
        };
        let pairs = vec![(bad.clone(), r(1, 2))];
        assert_eq!(check_homomorphism(&Q, phi, &pairs, 5).violations.len(), 0);
        for k in 6..12 {
            let report = check_homomorphism(&Q, phi, &pairs, k);
            assert_eq!(report.violations.len(), 1, "k = {k}");
            assert_eq!(report.violations[0].property, "additivity");
        }
    }

    #[test]
    fn scalar_uniqueness_examples() {
        let q = Arc::new(PositiveRationals);
        let samples = vec![r(1, 2), r(3, 4), r(5, 1), r(1, 8)];
        let doubled = check_scalar_uniqueness(q.clone(), (r(1, 1), r(1, 1)), (r(1, 1), r(2, 1)), &samples, 12).unwrap();
        assert_eq!(doubled.v, Some(r(2, 1)));
        assert!(doubled.residuals.iter().all(|x| x.residual.is_zero()));
        let same = check_scalar_uniqueness(q.clone(), (r(1, 1), r(1, 1)), (r(1, 1), r(1, 1)), &samples, 12).unwrap();
        assert_eq!(same.v, Some(r(1, 1)));
        let halves = check_scalar_uniqueness(q, (r(1, 1), r(1, 1)), (r(1, 2), r(1, 1)), &samples, 12).unwrap();
        assert_eq!(halves.v, Some(r(2, 1)));
        assert_eq!(halves.violations, 0);
    }

    #[test]
    fn scalar_uniqueness_within_tolerance_off_grid() {
        let q = Arc::new(PositiveRationals);
        let samples = vec![r(2, 3), r(5, 7), r(11, 3)];
        let report = check_scalar_uniqueness(q, (r(1, 3), r(1, 1)), (r(1, 1), r(5, 2)), &samples, 16).unwrap();
        assert_eq!(report.violations, 0);
    }

    fn random_batch(seed: u64, dyadic: bool) -> Vec<Rational> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..1000)
            .map(|_| {
                let p: i64 = rng.random_range(1..10_000);
                if dyadic {
                    Rational::dyadic(p, rng.random_range(0..20))
                } else {
                    r(p, rng.random_range(1..10_000))
                }
            })
            .collect()
    }

    #[test]
    fn builtin_structures_pass_axiom_samples() {
        let report = check_axioms(&PositiveRationals, &random_batch(1, false), 1 << 40);
        assert_eq!(report.triples_checked, 1000);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        let report = check_axioms(&PositiveDyadics, &random_batch(2, true), 1 << 40);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn axiom_check_catches_non_positive_structure() {
        /// Rationals under max: not positive.
        struct Max;
        impl MeasurementStructure for Max {
            type Element = Rational;
            fn name(&self) -> &str {
                "max"
            }
            fn concat(&self, a: &Rational, b: &Rational) -> Rational {
                a.clone().max(b.clone())
            }
            fn less(&self, a: &Rational, b: &Rational) -> bool {
                a < b
            }
        }
        let report = check_axioms(&Max, &[r(1, 2), r(1, 3), r(2, 1)], 1_000);
        assert!(report.failures.iter().any(|f| f.starts_with("positivity")));
        assert!(report.failures.iter().any(|f| f.starts_with("archimedean")));
    }

    proptest! {
        #[test]
        fn n_count_monotone(b in 1i64..50, a in 1i64..500, extra in 0i64..500, d in 1i64..20) {
            let (b, a1, a2) = (r(b, d), r(a, 7), r(a + extra, 7));
            prop_assert!(n_count(&Q, &b, &a1, u64::MAX).unwrap() <= n_count(&Q, &b, &a2, u64::MAX).unwrap());
        }

        #[test]
        fn approximants_converge(p in 1i64..100_000, q in 1i64..1000, k in 0usize..40) {
            let a = r(p, q);
            let one = r(1, 1);
            let x = holder_phi(&Q, &a, &one, &one, k, u64::MAX).unwrap();
            let y = holder_phi(&Q, &a, &one, &one, k + 1, u64::MAX).unwrap();
            prop_assert!((x - y).abs() <= Rational::pow2_neg(k as u64) * Rational::integer(2));
        }

        #[test]
        fn exact_on_dyadics(p in 1i64..1_000_000, e in 0u64..30, extra in 0usize..5) {
            let a = Rational::dyadic(p, e);
            let one = r(1, 1);
            prop_assert_eq!(holder_phi(&Q, &a, &one, &one, e as usize + extra, u64::MAX).unwrap(), a);
        }
    }
}
