//! Univariate polynomials over the rationals with Sturm-sequence real-root
//! isolation and recognition of roots lying in a quadratic field.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{int, rat_floor, surd_cmp, surd_normalize, Rational, Surd};

/// Coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.c.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_surd(&self, x: &Surd) -> Surd {
        self.c
            .iter()
            .rev()
            .fold(Surd::zero(), |acc, a| (&acc * x).add_rational(a))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_default()
                        + o.c.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * int(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn divrem(&self, o: &Poly) -> (Poly, Poly) {
        assert!(!o.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dq = o.c.len() - 1;
        if r.len() <= dq {
            return (Poly::new(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dq];
        for i in (0..q.len()).rev() {
            let f = &r[i + dq] / o.lead();
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] -= &f * b;
            }
            q[i] = f;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly::new(self.c.iter().map(|a| a / &l).collect())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.monic()
        } else {
            self.divrem(&g).0.monic()
        }
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive(&self) -> Vec<BigInt> {
        let l = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let mut v: Vec<BigInt> = self
            .c
            .iter()
            .map(|a| (a * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        if !g.is_zero() {
            for a in &mut v {
                *a /= &g;
            }
        }
        if v.last().is_some_and(Signed::is_negative) {
            for a in &mut v {
                *a = -&*a;
            }
        }
        v
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    fn variations(seq: &[Poly], x: &Rational) -> usize {
        let signs: Vec<Ordering> = seq
            .iter()
            .map(|p| p.eval(x).cmp(&Rational::zero()))
            .filter(|s| *s != Ordering::Equal)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Isolating intervals `(lo, hi]` for every real root of a squarefree
    /// polynomial, ascending.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let seq = self.sturm();
        let l = self.lead().abs();
        let bound = self
            .c
            .iter()
            .map(|a| a.abs() / &l)
            .fold(Rational::zero(), |m, x| if x > m { x } else { m })
            + int(1);
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let n = Self::variations(&seq, &a) - Self::variations(&seq, &b);
            match n {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mid = (&a + &b) / int(2);
                    stack.push((a, mid.clone()));
                    stack.push((mid, b));
                }
            }
        }
        out.sort();
        out
    }

    /// Shrinks an isolating interval `(lo, hi]` of a squarefree polynomial
    /// until its width is below `2^-bits`.
    pub fn refine(&self, lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
        let eps = Rational::new(BigInt::one(), BigInt::one() << bits);
        let (mut a, mut b) = (lo.clone(), hi.clone());
        if self.eval(&b).is_zero() {
            return (b.clone(), b);
        }
        let sb = self.eval(&b).signum();
        while &b - &a > eps {
            let mid = (&a + &b) / int(2);
            let v = self.eval(&mid);
            if v.is_zero() {
                return (mid.clone(), mid);
            }
            if v.signum() == sb {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a, b)
    }
}

/// A real root of a squarefree polynomial, exact when it lies in a
/// quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: Option<Surd>,
}

impl RealRoot {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

fn round_to_int(x: &Rational) -> BigInt {
    rat_floor(&(x + Rational::new(BigInt::one(), BigInt::from(2))))
}

fn in_interval(x: &Surd, lo: &Rational, hi: &Rational) -> bool {
    let lo = Surd::from_rational(lo.clone());
    let hi = Surd::from_rational(hi.clone());
    matches!(surd_cmp(x, &lo), Ok(Ordering::Greater | Ordering::Equal))
        && matches!(surd_cmp(x, &hi), Ok(Ordering::Less | Ordering::Equal))
}

/// All real roots, each refined to width `2^-bits` and identified exactly
/// when it is rational or shares a quadratic factor with another real root.
pub fn real_roots(f: &Poly, bits: u32) -> Vec<RealRoot> {
    let g = f.squarefree();
    let prim = g.primitive();
    let lead = Rational::from_integer(prim.last().cloned().unwrap_or_else(BigInt::one));
    let intervals: Vec<(Rational, Rational)> = g
        .isolate_real_roots()
        .into_iter()
        .map(|(a, b)| g.refine(&a, &b, bits))
        .collect();
    let mut out: Vec<RealRoot> = intervals
        .iter()
        .map(|(lo, hi)| RealRoot {
            lo: lo.clone(),
            hi: hi.clone(),
            exact: None,
        })
        .collect();
    for (i, root) in out.iter_mut().enumerate() {
        let (lo, hi) = (root.lo.clone(), root.hi.clone());
        if lo == hi {
            root.exact = Some(Surd::from_rational(lo));
            continue;
        }
        let r = root.midpoint();
        let cand = Rational::new(round_to_int(&(&r * &lead)), lead.to_integer());
        if g.eval(&cand).is_zero() && cand > lo && cand <= hi {
            root.exact = Some(Surd::from_rational(cand));
            continue;
        }
        for (j, (lo2, hi2)) in intervals.iter().enumerate() {
            if i == j {
                continue;
            }
            let s = (lo2 + hi2) / int(2);
            let sum = Rational::new(round_to_int(&((&r + &s) * &lead)), lead.to_integer());
            let prod = Rational::new(round_to_int(&(&r * &s * &lead)), lead.to_integer());
            let quad = Poly::new(vec![prod.clone(), -sum.clone(), Rational::one()]);
            if !g.divrem(&quad).1.is_zero() {
                continue;
            }
            let disc = &sum * &sum - int(4) * &prod;
            if disc.is_negative() {
                continue;
            }
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let found = [half.clone(), -half]
                .into_iter()
                .map(|c| surd_normalize(&sum / int(2), c, disc.clone()))
                .find(|z| in_interval(z, &lo, &hi));
            if let Some(z) = found {
                root.exact = Some(z);
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn divrem_and_gcd() {
        let f = Poly::from_ints(&[-1, 0, 1]);
        let g = Poly::from_ints(&[1, 1]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&Poly::from_ints(&[1, 2, 1])), g);
    }

    #[test]
    fn squarefree_drops_repeats() {
        let f = Poly::from_ints(&[1, 1])
            .mul(&Poly::from_ints(&[1, 1]))
            .mul(&Poly::from_ints(&[-2, 1]));
        assert_eq!(f.squarefree(), Poly::from_ints(&[-2, -1, 1]));
    }

    #[test]
    fn isolates_and_identifies() {
        // (z^2 - 5z - 5)(z - 3)(2z + 1)
        let f = Poly::from_ints(&[-5, -5, 1])
            .mul(&Poly::from_ints(&[-3, 1]))
            .mul(&Poly::from_ints(&[1, 2]));
        let roots = real_roots(&f, 120);
        assert_eq!(roots.len(), 4);
        assert_eq!(roots[1].exact, Some(Surd::from_rational(rat(-1, 2))));
        assert_eq!(roots[2].exact, Some(Surd::from_int(3)));
        assert_eq!(
            roots[3].exact,
            Some(surd_normalize(rat(5, 2), rat(3, 2), int(5)))
        );
        assert_eq!(
            roots[0].exact,
            Some(surd_normalize(rat(5, 2), rat(-3, 2), int(5)))
        );
    }

    #[test]
    fn irreducible_cubic_stays_numeric() {
        let f = Poly::from_ints(&[-2, 0, 0, 1]);
        let roots = real_roots(&f, 100);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].exact.is_none());
        let m = roots[0].midpoint();
        let err = (&m * &m * &m - int(2)).abs();
        assert!(err < rat(1, 1_000_000_000_000));
    }
}
