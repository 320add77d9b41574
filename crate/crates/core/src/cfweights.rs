//! Continued fractions and weight expansions.
//!
//! A rational `z = p/q > 1` has a unique canonical expansion
//! `[l0; l1, ..., lN]` with `lN >= 2` when `N >= 1`. The weight expansion of
//! `z` is the sequence produced by the Euclidean algorithm on `(z, 1)`; its
//! block multiplicities are exactly the continued fraction terms, and
//! `q * w(p/q)` is an integer vector ending in 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, surd_normalize, Rational, Surd};

/// Canonical finite continued fraction `[l0; l1, ..., lN]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

impl ContinuedFraction {
    /// Validates and normalizes: a trailing `1` (after the first term) is
    /// folded into its predecessor.
    pub fn new(mut terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("empty continued fraction".into()));
        }
        if terms.contains(&0) {
            return Err(Error::Domain(format!(
                "continued fraction terms must be positive: {terms:?}"
            )));
        }
        while terms.len() >= 2 && *terms.last().unwrap() == 1 {
            terms.pop();
            *terms.last_mut().unwrap() += 1;
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn value(&self) -> Rational {
        cf_to_rational(self)
    }

    /// Sum of the terms, i.e. the number of weights.
    pub fn length(&self) -> u64 {
        self.terms.iter().sum()
    }

    /// Concatenation, normalized.
    pub fn join(&self, tail: &[u64]) -> Result<Self> {
        let mut t = self.terms.clone();
        t.extend_from_slice(tail);
        ContinuedFraction::new(t)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        for (i, t) in self.terms[1..].iter().enumerate() {
            f.write_str(if i == 0 { ";" } else { "," })?;
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Homogeneous matrix `[[a, b], [c, d]]` of the map `x -> [terms; x]`.
fn head_matrix(terms: &[u64]) -> [BigInt; 4] {
    let (mut a, mut b, mut c, mut d) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &t in terms {
        let t = BigInt::from(t);
        let na = &a * &t + &b;
        let nc = &c * &t + &d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    [a, b, c, d]
}

/// Exact value of a finite continued fraction.
pub fn cf_to_rational(cf: &ContinuedFraction) -> Rational {
    let [a, _, c, _] = head_matrix(&cf.terms);
    Rational::new(a, c)
}

/// Canonical continued fraction of `z > 1`.
pub fn rational_to_cf(z: &Rational) -> Result<ContinuedFraction> {
    if *z <= Rational::one() {
        return Err(Error::Domain(format!(
            "continued fraction requires z > 1, got {}",
            fmt_rational(z)
        )));
    }
    let (mut p, mut q) = (z.numer().clone(), z.denom().clone());
    let mut terms = Vec::new();
    while !q.is_zero() {
        let (k, r) = p.div_rem(&q);
        terms.push(
            k.to_u64()
                .ok_or_else(|| Error::Domain(format!("continued fraction term {k} too large")))?,
        );
        p = q;
        q = r;
    }
    ContinuedFraction::new(terms)
}

/// Eventually periodic continued fraction `[head; {cycle}^inf]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicCf {
    pub head: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl PeriodicCf {
    pub fn value(&self) -> Result<Surd> {
        periodic_cf_value(&self.head, &self.cycle)
    }
}

impl fmt::Display for PeriodicCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let cyc = format!("{{{}}}*", join(&self.cycle));
        match self.head.split_first() {
            None => write!(f, "[{cyc}]"),
            Some((h0, [])) => write!(f, "[{h0};{cyc}]"),
            Some((h0, rest)) => write!(f, "[{h0};{},{cyc}]", join(rest)),
        }
    }
}

/// Exact value of `[head; {cycle}^inf]` in its quadratic field.
pub fn periodic_cf_value(head: &[u64], cycle: &[u64]) -> Result<Surd> {
    if cycle.is_empty() {
        return Err(Error::Domain(
            "periodic continued fraction needs a nonempty cycle".into(),
        ));
    }
    if head.iter().chain(cycle).any(|&t| t == 0) {
        return Err(Error::Domain(
            "continued fraction terms must be positive".into(),
        ));
    }
    // Fixed point of x = (A x + B)/(C x + D): C x^2 + (D - A) x - B = 0.
    let [a, b, c, d] = head_matrix(cycle);
    let am = &a - &d;
    let disc = &am * &am + BigInt::from(4) * &b * &c;
    let two_c = Rational::from_integer(BigInt::from(2) * &c);
    let x = surd_normalize(
        Rational::from_integer(am) / &two_c,
        Rational::one() / &two_c,
        Rational::from_integer(disc),
    );
    if head.is_empty() {
        return Ok(x);
    }
    let [ha, hb, hc, hd] = head_matrix(head);
    let r = |v: BigInt| Surd::from_rational(Rational::from_integer(v));
    let num = &(&x * &r(ha)) + &r(hb);
    let den = &(&x * &r(hc)) + &r(hd);
    num.try_div(&den)
}

/// Literal accepted by the CLI: `[5;1,6,4]` or `[5;1,6,{5,1}*]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfLiteral {
    Finite(ContinuedFraction),
    Periodic(PeriodicCf),
}

fn parse_terms(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad continued fraction term {t:?}")))
        })
        .collect()
}

impl FromStr for CfLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<CfLiteral> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("continued fraction must be bracketed: {s:?}")))?;
        let inner = inner.replacen(';', ",", 1);
        if let Some(open) = inner.find('{') {
            let close = inner
                .find('}')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let rest = inner[close + 1..].trim();
            if !(rest.is_empty() || rest == "*" || rest == "^inf") || close < open {
                return Err(Error::Parse(format!("cycle must close the literal: {s:?}")));
            }
            let head = parse_terms(&inner[..open])?;
            let cycle = parse_terms(&inner[open + 1..close])?;
            if cycle.is_empty() || cycle.contains(&0) || head.contains(&0) {
                return Err(Error::Parse(format!(
                    "invalid periodic continued fraction {s:?}"
                )));
            }
            return Ok(CfLiteral::Periodic(PeriodicCf { head, cycle }));
        }
        Ok(CfLiteral::Finite(ContinuedFraction::new(parse_terms(
            &inner,
        )?)?))
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<ContinuedFraction> {
        match s.parse::<CfLiteral>()? {
            CfLiteral::Finite(cf) => Ok(cf),
            CfLiteral::Periodic(_) => Err(Error::Parse(format!(
                "expected a finite continued fraction: {s:?}"
            ))),
        }
    }
}

/// Weight expansion stored as `(value, multiplicity)` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightExpansion {
    blocks: Vec<(Rational, u64)>,
}

impl WeightExpansion {
    pub fn blocks(&self) -> &[(Rational, u64)] {
        &self.blocks
    }

    /// Total number of weights.
    pub fn len(&self) -> u64 {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Weights in order, repeated per multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.blocks
            .iter()
            .flat_map(|(v, k)| std::iter::repeat_n(v, *k as usize))
    }

    pub fn sum(&self) -> Rational {
        self.blocks
            .iter()
            .map(|(v, k)| v * Rational::from_integer(BigInt::from(*k)))
            .sum()
    }

    pub fn sum_of_squares(&self) -> Rational {
        self.blocks
            .iter()
            .map(|(v, k)| v * v * Rational::from_integer(BigInt::from(*k)))
            .sum()
    }

    /// Dot product with an integer vector, the shorter one padded by zeros.
    pub fn dot(&self, m: &[BigInt]) -> Rational {
        let mut acc = Rational::zero();
        let mut idx = 0usize;
        for (v, k) in &self.blocks {
            if idx >= m.len() {
                break;
            }
            let end = idx.saturating_add(*k as usize).min(m.len());
            let s: BigInt = m[idx..end].iter().sum();
            acc += v * Rational::from_integer(s);
            idx = end;
        }
        acc
    }
}

/// Integral weights `q * w(p/q)` as `(value, multiplicity)` blocks.
pub fn integral_weight_blocks(p: &BigInt, q: &BigInt) -> Result<Vec<(BigInt, u64)>> {
    if !q.is_positive() || p <= q {
        return Err(Error::Domain(format!(
            "integral weights need p > q >= 1, got ({p}, {q})"
        )));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    let (mut big, mut small) = (p.clone(), q.clone());
    let mut out = Vec::new();
    while !small.is_zero() {
        let (k, r) = big.div_rem(&small);
        let k = k
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("multiplicity {k} too large")))?;
        out.push((small.clone(), k));
        big = small;
        small = r;
    }
    Ok(out)
}

/// Integral weights `q * w(p/q)` flattened.
pub fn integral_weights(p: &BigInt, q: &BigInt) -> Result<Vec<BigInt>> {
    let blocks = integral_weight_blocks(p, q)?;
    Ok(blocks
        .into_iter()
        .flat_map(|(v, k)| std::iter::repeat_n(v, k as usize))
        .collect())
}

/// Weight expansion of `z > 1`.
pub fn weight_expansion(z: &Rational) -> Result<WeightExpansion> {
    if *z <= Rational::one() {
        return Err(Error::Domain(format!(
            "weight expansion requires z > 1, got {}",
            fmt_rational(z)
        )));
    }
    let q = z.denom().clone();
    let blocks = integral_weight_blocks(z.numer(), &q)?
        .into_iter()
        .map(|(v, k)| (Rational::new(v, q.clone()), k))
        .collect();
    Ok(WeightExpansion { blocks })
}

/// Number of weights of `z`, the sum of its continued fraction terms.
pub fn cf_length(z: &Rational) -> Result<u64> {
    Ok(rational_to_cf(z)?.length())
}
