//! Real numbers coded as rational Cauchy sequences with the modulus
//! `|q_k - q_{k+1}| <= 2^-k`.
//!
//! A [`CompReal`] is a total rule `k -> q_k`, evaluated on demand. Every index is
//! computed at most once and memoized; clones share the memo table.
//!
//! The modulus telescopes to `|q_k - x| <= 2^(1-k)` for the limit `x`, which is
//! the contract callers rely on when they pick a precision.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::numerics::Rational;

type Rule = dyn Fn(u32) -> Rational + Send + Sync;

struct Inner {
    rule: Box<Rule>,
    memo: Mutex<HashMap<u32, Rational>>,
}

#[derive(Clone)]
pub struct CompReal {
    inner: Arc<Inner>,
}

/// Outcome of comparing two coded reals up to a precision ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GapComparison {
    /// The limits satisfy `x < y`.
    Less,
    /// The limits satisfy `x > y`.
    Greater,
    /// No separation was found at any level up to the given one.
    IndistinguishableAt(u32),
}

/// A level at which an approximant stream breaks the modulus.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("modulus violated at k = {k}: |q_k - q_(k+1)| = {gap}")]
pub struct ModulusViolation {
    pub k: u32,
    pub gap: Rational,
}

impl CompReal {
    /// Wrap an approximant rule. The caller vouches for the modulus;
    /// [`CompReal::check_modulus`] can sample it.
    pub fn from_fn<F>(rule: F) -> Self
    where
        F: Fn(u32) -> Rational + Send + Sync + 'static,
    {
        Self {
            inner: Arc::new(Inner {
                rule: Box::new(rule),
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_fn(move |_| q.clone())
    }

    /// The `k`-th approximant; within `2^(1-k)` of the limit.
    pub fn approx(&self, k: u32) -> Rational {
        // The lock is held while the rule runs so each index is evaluated once.
        // Rules only query reals built before them, so lock order follows the
        // construction DAG and cannot cycle.
        let mut memo = self.inner.memo.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(q) = memo.get(&k) {
            return q.clone();
        }
        let q = (self.inner.rule)(k);
        memo.insert(k, q.clone());
        q
    }

    /// `x + y` with approximants `x_(k+2) + y_(k+2)`.
    pub fn add(&self, other: &CompReal) -> CompReal {
        let (x, y) = (self.clone(), other.clone());
        CompReal::from_fn(move |k| x.approx(k + 2) + y.approx(k + 2))
    }

    pub fn neg(&self) -> CompReal {
        let x = self.clone();
        CompReal::from_fn(move |k| -x.approx(k))
    }

    /// `q * x`, shifting the index by `s` with `|q| <= 2^s`.
    pub fn scalar_mul(&self, q: &Rational) -> CompReal {
        let shift = u32::try_from(q.ceil_log2_abs()).expect("scalar magnitude too large");
        let (x, q) = (self.clone(), q.clone());
        CompReal::from_fn(move |k| &q * x.approx(k + shift))
    }

    /// Compare at levels `0..=kmax`; a verdict is returned as soon as the
    /// approximant gap exceeds `2^(2-k)`, which certifies it for the limits.
    pub fn cmp_gap(&self, other: &CompReal, kmax: u32) -> GapComparison {
        for k in 0..=kmax {
            let diff = self.approx(k) - other.approx(k);
            let threshold = threshold(k);
            if diff > threshold {
                return GapComparison::Greater;
            }
            if diff < -threshold {
                return GapComparison::Less;
            }
        }
        GapComparison::IndistinguishableAt(kmax)
    }

    /// Verify the modulus on levels `0..kmax`.
    pub fn check_modulus(&self, kmax: u32) -> Result<(), ModulusViolation> {
        let mut prev = self.approx(0);
        for k in 0..kmax {
            let next = self.approx(k + 1);
            let gap = (&prev - &next).abs();
            if gap > Rational::pow2_neg(k as u64) {
                return Err(ModulusViolation { k, gap });
            }
            prev = next;
        }
        Ok(())
    }

    /// CSV rows `k,q_k` for `k = 0..=kmax`, with a header line.
    pub fn to_csv(&self, kmax: u32) -> String {
        let mut out = String::from("k,q_k\n");
        for k in 0..=kmax {
            out.push_str(&format!("{},{}\n", k, self.approx(k)));
        }
        out
    }
}

/// `2^(2-k)`.
fn threshold(k: u32) -> Rational {
    match k {
        0 => Rational::integer(4),
        1 => Rational::integer(2),
        _ => Rational::pow2_neg(k as u64 - 2),
    }
}

impl fmt::Debug for CompReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memo = self.inner.memo.lock().unwrap_or_else(|e| e.into_inner());
        let mut known: Vec<_> = memo.iter().collect();
        known.sort_by_key(|(k, _)| **k);
        f.debug_struct("CompReal").field("known", &known).finish()
    }
}

pub fn creal_from_rational(q: Rational) -> CompReal {
    CompReal::from_rational(q)
}

pub fn creal_approx(x: &CompReal, k: u32) -> Rational {
    x.approx(k)
}

pub fn creal_add(x: &CompReal, y: &CompReal) -> CompReal {
    x.add(y)
}

pub fn creal_cmp_gap(x: &CompReal, y: &CompReal, kmax: u32) -> GapComparison {
    x.cmp_gap(y, kmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    /// Partial sums of the binary expansion of 1/3: 0.010101...
    fn third_by_bits() -> CompReal {
        CompReal::from_fn(|k| {
            let bits: Vec<_> = (1..=k as u64 + 1).filter(|i| i % 2 == 0).collect();
            bits.into_iter().map(Rational::pow2_neg).sum()
        })
    }

    #[test]
    fn constants() {
        let x = creal_from_rational(r(1, 3));
        assert_eq!(x.approx(0), r(1, 3));
        assert_eq!(x.approx(5), r(1, 3));
        assert_eq!(creal_from_rational(r(0, 1)).approx(17), Rational::zero());
        assert_eq!(creal_approx(&creal_from_rational(r(7, 8)), 3), r(7, 8));
        assert_eq!(creal_approx(&creal_from_rational(r(1, 2)), 10), r(1, 2));
    }

    #[test]
    fn addition_examples() {
        let quarter = creal_from_rational(r(1, 4));
        let sum = creal_add(&quarter, &quarter);
        assert!((sum.approx(3) - r(1, 2)).abs() <= r(1, 4));

        let half = creal_add(&creal_from_rational(r(1, 3)), &creal_from_rational(r(1, 6)));
        for k in 0..10 {
            assert_eq!(half.approx(k), r(1, 2));
        }

        let x = third_by_bits();
        let shifted = creal_add(&x, &creal_from_rational(Rational::zero()));
        for k in 0..10 {
            assert_eq!(shifted.approx(k), x.approx(k + 2));
        }

        let zero = creal_add(&creal_from_rational(r(1, 2)), &creal_from_rational(r(-1, 2)));
        for k in 0..10 {
            assert!(zero.approx(k).is_zero());
        }
    }

    #[test]
    fn gap_comparison_examples() {
        let half = creal_from_rational(r(1, 2));
        assert_eq!(
            creal_cmp_gap(&half, &creal_from_rational(r(1, 4)), 10),
            GapComparison::Greater
        );
        assert_eq!(
            creal_cmp_gap(&creal_from_rational(r(1, 4)), &half, 10),
            GapComparison::Less
        );
        let third = creal_from_rational(r(1, 3));
        assert_eq!(
            creal_cmp_gap(&third, &third_by_bits(), 20),
            GapComparison::IndistinguishableAt(20)
        );
        let nudged = creal_from_rational(r(1, 2) + Rational::pow2_neg(10));
        assert_eq!(
            creal_cmp_gap(&half, &nudged, 5),
            GapComparison::IndistinguishableAt(5)
        );
    }

    #[test]
    fn binary_expansion_obeys_modulus() {
        third_by_bits().check_modulus(30).unwrap();
        let bad = CompReal::from_fn(|k| if k == 3 { Rational::one() } else { Rational::zero() });
        assert_eq!(bad.check_modulus(30).unwrap_err().k, 2);
    }

    #[test]
    fn scalar_multiplication() {
        let x = third_by_bits();
        let y = x.scalar_mul(&r(5, 1));
        y.check_modulus(30).unwrap();
        assert_eq!(y.approx(0), r(5, 1) * x.approx(3));
        let z = x.scalar_mul(&r(-1, 7));
        z.check_modulus(30).unwrap();
        assert_eq!(z.approx(4), r(-1, 7) * x.approx(4));
    }

    #[test]
    fn each_index_is_computed_once_under_contention() {
        let calls = Arc::new(AtomicUsize::new(0));
        let counter = calls.clone();
        let x = CompReal::from_fn(move |k| {
            counter.fetch_add(1, Ordering::SeqCst);
            Rational::pow2_neg(k as u64)
        });
        let results: Vec<Vec<Rational>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|_| {
                    let x = x.clone();
                    s.spawn(move || (0..20).map(|k| x.approx(k)).collect())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(calls.load(Ordering::SeqCst), 20);
    }

    #[test]
    fn csv_dump() {
        let csv = creal_from_rational(r(1, 3)).to_csv(2);
        assert_eq!(csv, "k,q_k\n0,1/3\n1,1/3\n2,1/3\n");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| Rational::new(p, q))
    }

    /// Dyadic truncations of a rational, a non-constant stream with the modulus.
    fn truncations(q: Rational) -> CompReal {
        CompReal::from_fn(move |k| {
            Rational::dyadic((&q * Rational::pow2(k as u64 + 1)).floor(), k as u64 + 1)
        })
    }

    proptest! {
        #[test]
        fn modulus_preserved(a in arb_rational(), b in arb_rational(), s in arb_rational()) {
            let x = truncations(a.clone());
            let y = creal_from_rational(b.clone());
            for z in [x.clone(), y.clone(), x.add(&y), x.scalar_mul(&s), x.add(&y).scalar_mul(&s), x.neg()] {
                prop_assert!(z.check_modulus(30).is_ok());
            }
        }

        #[test]
        fn approximation_stability(a in arb_rational(), k in 0u32..20, j in 0u32..=10) {
            let x = truncations(a).add(&third_by_bits());
            let gap = (x.approx(k) - x.approx(k + j)).abs();
            prop_assert!(gap <= Rational::pow2_neg(k as u64) * Rational::integer(2));
        }

        #[test]
        fn certified_comparisons_are_sound(a in arb_rational(), b in arb_rational(), kmax in 0u32..25) {
            let verdict = truncations(a.clone()).cmp_gap(&creal_from_rational(b.clone()), kmax);
            match verdict {
                GapComparison::Less => prop_assert!(a < b),
                GapComparison::Greater => prop_assert!(a > b),
                GapComparison::IndistinguishableAt(k) => prop_assert_eq!(k, kmax),
            }
        }
    }
}
