//! Exact scalars: arbitrary-precision rationals and elements of real
//! quadratic fields `Q(sqrt D)`.
//!
//! Every decision in the crate (comparisons against volume bounds, window
//! membership, Cremona verdicts) goes through the exact comparisons here.
//! Floating point appears only in [`Surd::to_f64`] and the decimal
//! rendering helpers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p/q`, or `p` when the denominator is 1.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a terminating decimal such as `0.3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() && ip.is_empty() {
            return Err(bad());
        }
        if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Floor of a rational.
pub fn rat_floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Ceiling of a rational.
pub fn rat_ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = exact_isqrt(r.numer())?;
    let d = exact_isqrt(r.denom())?;
    Some(Rational::new(n, d))
}

/// Trial-division bound for squarefree decomposition.
const TRIAL_LIMIT: u64 = 1 << 20;

/// Writes `n = k^2 * s` with `s` squarefree (for `n` up to about 2^60
/// this is exact; for larger inputs `s` is squarefree with respect to all
/// primes below 2^20, and any remaining square cofactor is detected).
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "squarefree_decompose of negative integer");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    if let Some(s) = exact_isqrt(n) {
        return (s, BigInt::one());
    }
    if let Some(v) = n.to_u128() {
        let (k, s) = squarefree_u128(v);
        return (BigInt::from(k), BigInt::from(s));
    }
    let mut rem = n.clone();
    let mut k = BigInt::one();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p < TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp * &bp > rem {
            break;
        }
        let mut e = 0u32;
        while (&rem % &bp).is_zero() {
            rem /= &bp;
            e += 1;
        }
        if e > 0 {
            k *= num_traits::pow(bp.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                s *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = exact_isqrt(&rem) {
        k *= r;
    } else {
        s *= rem;
    }
    (k, s)
}

fn squarefree_u128(mut n: u128) -> (u128, u128) {
    let mut k: u128 = 1;
    let mut s: u128 = 1;
    let mut p: u128 = 2;
    while p < TRIAL_LIMIT as u128 && p * p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                k *= p;
            }
            if e % 2 == 1 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = n.isqrt();
    if r * r == n {
        k *= r;
    } else {
        s *= n;
    }
    (k, s)
}

/// Sign of `x + y*sqrt(d)` for integers `x, y` and `d >= 0`.
pub fn sign_int_surd(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let sx = x.sign();
    let sy = if d.is_zero() { Sign::NoSign } else { y.sign() };
    match (sx, sy) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (Sign::NoSign, s) | (s, Sign::NoSign) => sign_to_ord(s),
        (a, b) if a == b => sign_to_ord(a),
        (a, _) => {
            let lhs = x * x;
            let rhs = y * y * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sign_to_ord(a),
                Ordering::Less => sign_to_ord(a).reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Machine-integer version of [`sign_int_surd`]; `None` on overflow.
#[inline]
pub fn sign_i128_surd(x: i128, y: i128, d: i128) -> Option<Ordering> {
    let y = if d == 0 { 0 } else { y };
    let sx = x.signum();
    let sy = y.signum();
    if sx == 0 && sy == 0 {
        return Some(Ordering::Equal);
    }
    if sy == 0 {
        return Some(sx.cmp(&0));
    }
    if sx == 0 || sx == sy {
        return Some(sy.cmp(&0));
    }
    let lhs = x.checked_mul(x)?;
    let rhs = y.checked_mul(y)?.checked_mul(d)?;
    Some(match lhs.cmp(&rhs) {
        Ordering::Greater => sx.cmp(&0),
        Ordering::Less => sy.cmp(&0),
        Ordering::Equal => Ordering::Equal,
    })
}

fn sign_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// An element `a + c*sqrt(D)` of a real quadratic field.
///
/// The radicand is 0 exactly when the value is rational (then `c = 0`);
/// otherwise it is a squarefree integer at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    c: Rational,
    d: BigInt,
}

/// Canonical surd equal to `a + c*sqrt(raw)`. Panics if `raw < 0`; use
/// [`Surd::new`] for a checked variant.
pub fn surd_normalize(a: Rational, c: Rational, raw: Rational) -> Surd {
    Surd::new(a, c, raw).expect("negative radicand")
}

/// Exact ordering of two surds.
pub fn surd_cmp(x: &Surd, y: &Surd) -> Result<Ordering> {
    Ok(x.try_sub(y)?.signum())
}

/// Exact ordering of `x` against `sqrt(r)`.
pub fn sqrt_cmp(x: &Surd, r: &Surd) -> Result<Ordering> {
    if x.is_negative() {
        return Err(Error::NegativeOperand(x.to_string()));
    }
    if r.is_negative() {
        return Err(Error::NegativeOperand(r.to_string()));
    }
    surd_cmp(&x.square(), r)
}

impl Surd {
    /// Checked constructor; see [`surd_normalize`].
    pub fn new(a: Rational, c: Rational, raw: Rational) -> Result<Surd> {
        if raw.is_negative() {
            return Err(Error::NegativeOperand(fmt_rational(&raw)));
        }
        if c.is_zero() || raw.is_zero() {
            return Ok(Surd::from_rational(a));
        }
        // sqrt(n/m) = sqrt(n*m)/m, decomposed factor by factor.
        let (kn, sn) = squarefree_decompose(raw.numer());
        let (km, sm) = squarefree_decompose(raw.denom());
        let radicand = &sn * &sm;
        let coeff = c * Rational::new(kn, km * sm);
        if radicand.is_one() {
            return Ok(Surd::from_rational(a + coeff));
        }
        Ok(Surd {
            a,
            c: coeff,
            d: radicand,
        })
    }

    pub fn from_rational(a: Rational) -> Surd {
        Surd {
            a,
            c: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Surd {
        Surd::from_rational(int(n))
    }

    pub fn zero() -> Surd {
        Surd::from_int(0)
    }

    pub fn one() -> Surd {
        Surd::from_int(1)
    }

    /// `sqrt(n)` for a nonnegative integer.
    pub fn sqrt_int(n: i64) -> Surd {
        surd_normalize(Rational::zero(), int(1), int(n))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_coefficient(&self) -> &Rational {
        &self.c
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    pub fn conjugate(&self) -> Surd {
        Surd {
            a: self.a.clone(),
            c: -&self.c,
            d: self.d.clone(),
        }
    }

    /// Field norm `a^2 - c^2 D`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.c * &self.c * Rational::from_integer(self.d.clone())
    }

    /// Exact sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        let (x, y, _) = self.integer_form();
        sign_int_surd(&x, &y, &self.d)
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Surd {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Returns `(A, C, E)` with `self = (A + C sqrt(D)) / E` and `E > 0`.
    pub fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let e = self.a.denom().lcm(self.c.denom());
        let x = self.a.numer() * (&e / self.a.denom());
        let y = self.c.numer() * (&e / self.c.denom());
        (x, y, e)
    }

    /// Brings two surds into a common field representation.
    fn align(&self, other: &Surd) -> Result<(BigInt, Rational, Rational, Rational, Rational)> {
        if self.d == other.d || other.is_rational() {
            let d = if self.is_rational() {
                other.d.clone()
            } else {
                self.d.clone()
            };
            return Ok((
                d,
                self.a.clone(),
                self.c.clone(),
                other.a.clone(),
                other.c.clone(),
            ));
        }
        if self.is_rational() {
            return Ok((
                other.d.clone(),
                self.a.clone(),
                self.c.clone(),
                other.a.clone(),
                other.c.clone(),
            ));
        }
        // Radicands that differ by a square factor still describe one field.
        if let Some(s) = exact_isqrt(&(&self.d * &other.d)) {
            let scale = Rational::new(s, self.d.clone());
            return Ok((
                self.d.clone(),
                self.a.clone(),
                self.c.clone(),
                other.a.clone(),
                &other.c * scale,
            ));
        }
        Err(Error::MixedRadicands(
            self.d.to_string(),
            other.d.to_string(),
        ))
    }

    fn build(a: Rational, c: Rational, d: BigInt) -> Surd {
        if c.is_zero() || d.is_zero() {
            Surd::from_rational(a)
        } else {
            Surd { a, c, d }
        }
    }

    pub fn try_add(&self, o: &Surd) -> Result<Surd> {
        let (d, a1, c1, a2, c2) = self.align(o)?;
        Ok(Surd::build(a1 + a2, c1 + c2, d))
    }

    pub fn try_sub(&self, o: &Surd) -> Result<Surd> {
        let (d, a1, c1, a2, c2) = self.align(o)?;
        Ok(Surd::build(a1 - a2, c1 - c2, d))
    }

    pub fn try_mul(&self, o: &Surd) -> Result<Surd> {
        let (d, a1, c1, a2, c2) = self.align(o)?;
        let dr = Rational::from_integer(d.clone());
        let a = &a1 * &a2 + &c1 * &c2 * dr;
        let c = a1 * c2 + c1 * a2;
        Ok(Surd::build(a, c, d))
    }

    pub fn try_div(&self, o: &Surd) -> Result<Surd> {
        self.try_mul(&o.recip()?)
    }

    /// Multiplicative inverse via the conjugate.
    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let n = self.norm();
        Ok(Surd::build(&self.a / &n, -&self.c / &n, self.d.clone()))
    }

    pub fn square(&self) -> Surd {
        self * self
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut acc = Surd::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Surd {
        Surd::build(&self.a * r, &self.c * r, self.d.clone())
    }

    pub fn add_rational(&self, r: &Rational) -> Surd {
        Surd::build(&self.a + r, self.c.clone(), self.d.clone())
    }

    /// Square root inside the same field (or a new field when `self` is
    /// rational). `None` if the root is not of the form `u + v sqrt(D)`.
    pub fn sqrt(&self) -> Result<Option<Surd>> {
        if self.is_negative() {
            return Err(Error::NegativeOperand(self.to_string()));
        }
        if self.is_rational() {
            return Ok(Some(surd_normalize(
                Rational::zero(),
                Rational::one(),
                self.a.clone(),
            )));
        }
        let Some(n) = rational_sqrt(&self.norm()) else {
            return Ok(None);
        };
        let two = int(2);
        for u2 in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if !u2.is_positive() {
                continue;
            }
            let Some(u) = rational_sqrt(&u2) else {
                continue;
            };
            let v = &self.c / (&two * &u);
            let cand = Surd::build(u, v, self.d.clone());
            let cand = if cand.is_negative() { -cand } else { cand };
            if cand.square() == *self {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let (x, y, e) = self.integer_form();
        if y.is_zero() || self.d.is_zero() {
            return x.div_floor(&e);
        }
        let s = (&y * &y * &self.d).sqrt();
        if y.is_positive() {
            (x + s).div_floor(&e)
        } else {
            (x - s - BigInt::one()).div_floor(&e)
        }
    }

    /// Exact ceiling.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        // floor(x * 2^80) / 2^80 keeps full f64 precision for moderate values.
        let scaled = self
            .scale(&Rational::from_integer(BigInt::one() << 80u32))
            .floor();
        let (ip, fp) = scaled.div_mod_floor(&(BigInt::one() << 80u32));
        ip.to_f64().unwrap_or(f64::NAN) + fp.to_f64().unwrap_or(0.0) / 2f64.powi(80)
    }

    /// Rational approximation with `|self - r| < 10^-digits`.
    pub fn approx(&self, digits: u32) -> Rational {
        let p = num_traits::pow(BigInt::from(10), digits as usize);
        Rational::new(self.scale(&Rational::from_integer(p.clone())).floor(), p)
    }

    /// Decimal string rounded to `sig` significant digits, trailing zeros
    /// removed.
    pub fn to_decimal(&self, sig: usize) -> String {
        decimal_string(self, sig)
    }
}

fn decimal_string(x: &Surd, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let v = x.abs();
    let ten = BigInt::from(10);
    // e = floor(log10 v)
    let mut e: i64 = {
        let f = v.floor();
        if !f.is_zero() {
            f.to_string().len() as i64 - 1
        } else {
            let mut j = 0i64;
            let mut t = v.clone();
            while t.floor().is_zero() {
                t = t.scale(&Rational::from_integer(ten.clone()));
                j += 1;
            }
            -j
        }
    };
    let shift = sig as i64 - 1 - e;
    let factor = if shift >= 0 {
        Rational::from_integer(num_traits::pow(ten.clone(), shift as usize))
    } else {
        Rational::new(
            BigInt::one(),
            num_traits::pow(ten.clone(), (-shift) as usize),
        )
    };
    let mut m = v.scale(&factor).add_rational(&rat(1, 2)).floor();
    if m >= num_traits::pow(ten.clone(), sig) {
        m /= &ten;
        e += 1;
    }
    let digits = m.to_string();
    let (ip, fp) = if e >= 0 {
        let e = e as usize;
        if e + 1 >= digits.len() {
            (
                format!("{}{}", digits, "0".repeat(e + 1 - digits.len())),
                String::new(),
            )
        } else {
            (digits[..e + 1].to_string(), digits[e + 1..].to_string())
        }
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-e - 1) as usize), digits),
        )
    };
    let fp = fp.trim_end_matches('0');
    let body = if fp.is_empty() {
        ip
    } else {
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal rendering of a rational; see [`Surd::to_decimal`].
pub fn rational_decimal(r: &Rational, sig: usize) -> String {
    decimal_string(&Surd::from_rational(r.clone()), sig)
}

impl PartialOrd for Surd {
    /// `None` for surds over different fields.
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        surd_cmp(self, other).ok()
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Surd {
        Surd::from_rational(r)
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Surd {
        Surd::from_int(n)
    }
}

macro_rules! surd_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Surd> for &Surd {
            type Output = Surd;
            /// Panics when the operands lie in different quadratic fields.
            fn $m(self, o: &Surd) -> Surd {
                self.$try(o)
                    .expect("surd arithmetic across different radicands")
            }
        }
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                (&self).$m(o)
            }
        }
        impl $tr<Surd> for &Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                self.$m(&o)
            }
        }
    };
}

surd_binop!(Add, add, try_add);
surd_binop!(Sub, sub, try_sub);
surd_binop!(Mul, mul, try_mul);
surd_binop!(Div, div, try_div);

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::build(-&self.a, -&self.c, self.d.clone())
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl fmt::Display for Surd {
    /// `a+c*sqrt(D)`, omitting zero or unit parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let mut s = String::new();
        if !self.a.is_zero() {
            s.push_str(&fmt_rational(&self.a));
            s.push(if self.c.is_negative() { '-' } else { '+' });
        } else if self.c.is_negative() {
            s.push('-');
        }
        let c = self.c.abs();
        if !c.is_one() {
            s.push_str(&fmt_rational(&c));
            s.push('*');
        }
        s.push_str(&format!("sqrt({})", self.d));
        f.write_str(&s)
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Accepts sums of rational terms and terms `[c*]sqrt(D)`, e.g.
    /// `3/2+1/2*sqrt(5)`, `-sqrt(2)`, `7`.
    fn from_str(s: &str) -> Result<Surd> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty surd".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0i32;
        for (i, ch) in src.chars().enumerate() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch)
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch)
                }
                '+' | '-' if depth == 0 => {
                    if !cur.is_empty() {
                        terms.push((neg, std::mem::take(&mut cur)));
                    } else if i > 0 {
                        return Err(Error::Parse(format!("dangling sign in {s:?}")));
                    }
                    neg = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {s:?}")));
        }
        terms.push((neg, cur));
        let mut acc = Surd::zero();
        for (neg, t) in terms {
            let v = parse_term(&t)?;
            let v = if neg { -v } else { v };
            acc = acc.try_add(&v)?;
        }
        Ok(acc)
    }
}

fn parse_term(t: &str) -> Result<Surd> {
    if let Some(pos) = t.find("sqrt(") {
        if !t.ends_with(')') {
            return Err(Error::Parse(format!("malformed sqrt term {t:?}")));
        }
        let coeff = match &t[..pos] {
            "" => Rational::one(),
            pre => parse_rational(
                pre.strip_suffix('*')
                    .ok_or_else(|| Error::Parse(format!("expected '*' in {t:?}")))?,
            )?,
        };
        let rad = parse_rational(&t[pos + 5..t.len() - 1])?;
        return Surd::new(Rational::zero(), coeff, rad);
    }
    Ok(Surd::from_rational(parse_rational(t)?))
}
