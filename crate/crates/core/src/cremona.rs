//! Cremona moves and recognition of exceptional classes by reduction.
//!
//! A state `(d; n_1, n_2, ...)` carries the degree and every multiplicity,
//! including the one on `E_0`. A standard move acts on the three largest
//! entries with defect `delta = d - n_1 - n_2 - n_3`:
//! `(d, n_1, n_2, n_3) -> (d + delta, n_1 + delta, n_2 + delta, n_3 + delta)`.
//! A class is exceptional iff repeated standard moves reach `E_1 = (0; -1)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::classes::{check_diophantine, fmt_multiplicities, ExClass};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionState {
    pub degree: BigInt,
    entries: Vec<BigInt>,
}

impl ReductionState {
    /// Sorts nonincreasing and drops zeros.
    pub fn new(degree: BigInt, mut entries: Vec<BigInt>) -> ReductionState {
        entries.retain(|x| !x.is_zero());
        entries.sort_by(|a, b| b.cmp(a));
        ReductionState { degree, entries }
    }

    pub fn from_class(c: &ExClass) -> ReductionState {
        let mut e = vec![c.m.clone()];
        e.extend_from_slice(c.mvec());
        ReductionState::new(c.d.clone(), e)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// `(3 degree - sum, degree^2 - sum of squares)`, invariant under moves.
    pub fn invariants(&self) -> (BigInt, BigInt) {
        let s: BigInt = self.entries.iter().sum();
        let s2: BigInt = self.entries.iter().map(|x| x * x).sum();
        (
            BigInt::from(3) * &self.degree - s,
            &self.degree * &self.degree - s2,
        )
    }

    /// The three largest entries of the zero-padded sequence.
    fn head(&self) -> Vec<BigInt> {
        let mut h: Vec<BigInt> = self
            .entries
            .iter()
            .filter(|x| x.is_positive())
            .take(3)
            .cloned()
            .collect();
        h.resize(3, BigInt::zero());
        h
    }

    /// `d - n_1 - n_2 - n_3`.
    pub fn defect(&self) -> BigInt {
        &self.degree - self.head().iter().sum::<BigInt>()
    }

    pub fn is_e1(&self) -> bool {
        self.degree.is_zero() && self.entries.len() == 1 && self.entries[0] == BigInt::from(-1)
    }
}

impl fmt::Display for ReductionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.degree, fmt_multiplicities(&self.entries))
    }
}

/// Raw transformation on the first three positions of `(d, entries)`,
/// without sorting; an involution.
pub fn cremona_raw(degree: &BigInt, entries: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut e = entries.to_vec();
    while e.len() < 3 {
        e.push(BigInt::zero());
    }
    let delta = degree - &e[0] - &e[1] - &e[2];
    for x in e.iter_mut().take(3) {
        *x += &delta;
    }
    (degree + delta, e)
}

/// Standard move: transform the three largest entries, then re-sort and
/// drop zeros.
pub fn cremona_move(s: &ReductionState) -> ReductionState {
    let (d, mut e) = cremona_raw(&s.degree, &s.head());
    e.extend(
        s.entries
            .iter()
            .filter(|x| x.is_positive())
            .skip(3)
            .cloned(),
    );
    e.extend(s.entries.iter().filter(|x| x.is_negative()).cloned());
    ReductionState::new(d, e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exceptional,
    Fake(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub verdict: Verdict,
    /// Every state visited, starting with the input.
    pub log: Vec<ReductionState>,
}

impl Reduction {
    /// One row per state: step, degree, run-length entries, and the number
    /// of entries that vanished in that move.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.log.iter().enumerate() {
            let dropped = if i == 0 {
                0
            } else {
                self.log[i - 1].entries.len() as i64 - s.entries.len() as i64
            };
            out.push_str(&format!(
                "{i}\t{}\t{}",
                s.degree,
                fmt_multiplicities(&s.entries)
            ));
            if dropped > 0 {
                out.push_str(&format!("\t-{dropped}"));
            }
            out.push('\n');
        }
        out
    }
}

fn fake_reason(s: &ReductionState) -> Option<String> {
    if s.degree.is_negative() {
        return Some(format!("negative degree at {s}"));
    }
    if let Some(x) = s.entries.iter().find(|x| **x < BigInt::from(-1)) {
        return Some(format!("entry {x} below -1 at {s}"));
    }
    if s.degree.is_zero() {
        return Some(format!("degree 0 with entries other than E1 at {s}"));
    }
    if !s.defect().is_negative() {
        return Some(format!(
            "no move reduces the degree at {s} (defect {})",
            s.defect()
        ));
    }
    None
}

/// Reduces a Diophantine class by standard moves.
pub fn reduce(c: &ExClass, max_steps: usize) -> Result<Reduction> {
    if !check_diophantine(c) {
        return Err(Error::NotDiophantine(c.to_string()));
    }
    let mut s = ReductionState::from_class(c);
    let mut log = vec![s.clone()];
    loop {
        if s.is_e1() {
            return Ok(Reduction {
                verdict: Verdict::Exceptional,
                log,
            });
        }
        if let Some(why) = fake_reason(&s) {
            return Ok(Reduction {
                verdict: Verdict::Fake(why),
                log,
            });
        }
        if log.len() > max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        s = cremona_move(&s);
        log.push(s.clone());
    }
}

/// Default step budget: the degree drops on every move.
pub fn default_max_steps(c: &ExClass) -> usize {
    use num_traits::ToPrimitive;
    c.d.to_usize().unwrap_or(usize::MAX - 2).saturating_add(2)
}

/// Reduces each class independently.
pub fn reduce_all(classes: &[ExClass]) -> Vec<Result<Reduction>> {
    classes
        .par_iter()
        .map(|c| reduce(c, default_max_steps(c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staircase::family::{
        blocking_class, prestaircase_generate, Family, StairFamilySpec,
    };
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn state(d: i64, e: &[i64]) -> ReductionState {
        ReductionState::new(b(d), e.iter().map(|&x| b(x)).collect())
    }

    fn verdict(s: &str) -> Verdict {
        let c: ExClass = s.parse().unwrap();
        reduce(&c, 1000).unwrap().verdict
    }

    #[test]
    fn move_examples() {
        assert_eq!(cremona_move(&state(1, &[0, 0, 0])), state(2, &[1, 1, 1]));
        assert_eq!(cremona_move(&state(2, &[1, 1, 1])), state(1, &[]));
        let c: ExClass = "1538,987;3191/436".parse().unwrap();
        let s0 = ReductionState::from_class(&c);
        assert_eq!(s0.to_string(), "(1538;987,436^7,139^3,19^7,6^3,1^6)");
        let s1 = cremona_move(&s0);
        assert_eq!(s1.to_string(), "(1217;666,436^5,139^3,115^2,19^7,6^3,1^6)");
        let s2 = cremona_move(&s1);
        assert_eq!(s2.to_string(), "(896;436^3,345,139^3,115^4,19^7,6^3,1^6)");
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(verdict("2,0;[1^5]"), Verdict::Exceptional);
        assert_eq!(verdict("73,20;170/29"), Verdict::Exceptional);
        assert!(matches!(verdict("48,14;111/19"), Verdict::Fake(_)));
        assert_eq!(verdict("0,-1;[]"), Verdict::Exceptional);
        assert_eq!(verdict("1,1;[1]"), Verdict::Exceptional);
        assert_eq!(verdict("1538,987;3191/436"), Verdict::Exceptional);
    }

    #[test]
    fn non_diophantine_rejected() {
        let c: ExClass = "2,0;[1^4]".parse().unwrap();
        assert!(matches!(reduce(&c, 10), Err(Error::NotDiophantine(_))));
    }

    #[test]
    fn step_limit_reported() {
        let c: ExClass = "73,20;170/29".parse().unwrap();
        assert!(matches!(reduce(&c, 1), Err(Error::StepLimit(1))));
    }

    #[test]
    fn families_and_blocking_classes_are_exceptional() {
        for (f, d) in StairFamilySpec::kinds() {
            for n in 0..=3 {
                for end in [
                    crate::staircase::Ending::Short,
                    crate::staircase::Ending::Long,
                ] {
                    let Ok(s) = StairFamilySpec::new(f, d, n, end) else {
                        continue;
                    };
                    for c in prestaircase_generate(&s, 4).unwrap() {
                        let e = c.to_exclass();
                        assert_eq!(
                            reduce(&e, default_max_steps(&e)).unwrap().verdict,
                            Verdict::Exceptional,
                            "{s} {c}"
                        );
                    }
                }
            }
        }
        for n in 0..=5 {
            for f in [Family::U, Family::L, Family::E] {
                let Ok(c) = blocking_class(f, n) else {
                    continue;
                };
                let e = c.to_exclass();
                assert_eq!(
                    reduce(&e, default_max_steps(&e)).unwrap().verdict,
                    Verdict::Exceptional,
                    "{f} {n}"
                );
            }
        }
    }

    #[test]
    fn log_preserves_invariants() {
        let c: ExClass = "1538,987;3191/436".parse().unwrap();
        let r = reduce(&c, 1000).unwrap();
        let inv = r.log[0].invariants();
        assert_eq!(inv, (b(1), b(-1)));
        assert!(r.log.iter().all(|s| s.invariants() == inv));
        assert!(r.log.windows(2).all(|w| w[1].degree < w[0].degree));
        assert!(r.table().starts_with("0\t1538\t987,436^7"));
    }

    proptest! {
        #[test]
        fn raw_move_is_involution(d in -50i64..200, e in proptest::collection::vec(-3i64..100, 0..8)) {
            let entries: Vec<BigInt> = e.iter().map(|&x| b(x)).collect();
            let (d1, e1) = cremona_raw(&b(d), &entries);
            let (d2, e2) = cremona_raw(&d1, &e1);
            prop_assert_eq!(d2, b(d));
            let mut padded = entries.clone();
            while padded.len() < 3 { padded.push(BigInt::zero()); }
            prop_assert_eq!(e2, padded);
        }

        #[test]
        fn move_preserves_invariants(d in 0i64..200, e in proptest::collection::vec(0i64..100, 0..8)) {
            let s = state(d, &e);
            prop_assert_eq!(cremona_move(&s).invariants(), s.invariants());
        }
    }
}
