//! Exceptional-class candidates and their obstruction functions.
//!
//! A class `(d, m; m_1, m_2, ...)` obstructs embeddings of `E(1, z)` into
//! the Hirzebruch target `H_b` through
//! `mu(z) = (m . w(z)) / (d - m b)`, which is compared with the volume
//! bound `V_b(z) = sqrt(z / (1 - b^2))`.
//!
//! For a quasi-perfect class with center `a = p/q` the obstruction has a
//! closed form on a window around `a`:
//! `q z / (d - m b)` to the left of `a` and `p / (d - m b)` from `a` on.
//! This is the only place irrational `z` is handled exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cfweights::{integral_weights, rational_to_cf, weight_expansion, ContinuedFraction};
use crate::error::{Error, Result};
use crate::exactnum::{
    exact_isqrt, fmt_rational, int, rat_ceil, rat_floor, sqrt_cmp, surd_cmp, Rational, Surd,
};
use crate::staircase::{acc_inv, Branch};

/// Candidate class `(d, m; mvec)`; `mvec` is kept nonincreasing with
/// trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExClass {
    pub d: BigInt,
    pub m: BigInt,
    mvec: Vec<BigInt>,
}

impl ExClass {
    pub fn new(d: BigInt, m: BigInt, mut mvec: Vec<BigInt>) -> Self {
        mvec.sort_by(|a, b| b.cmp(a));
        while mvec.last().is_some_and(Zero::is_zero) {
            mvec.pop();
        }
        ExClass { d, m, mvec }
    }

    pub fn mvec(&self) -> &[BigInt] {
        &self.mvec
    }

    /// `(3d - m - sum m_i, d^2 - m^2 - sum m_i^2)`; both are `(1, -1)` for a
    /// Diophantine class.
    pub fn chern_and_self_intersection(&self) -> (BigInt, BigInt) {
        let s: BigInt = self.mvec.iter().sum();
        let s2: BigInt = self.mvec.iter().map(|x| x * x).sum();
        (
            BigInt::from(3) * &self.d - &self.m - s,
            &self.d * &self.d - &self.m * &self.m - s2,
        )
    }

    /// Recovers the center when `mvec = q w(p/q)`.
    pub fn as_quasi_perfect(&self) -> Option<QuasiPerfectClass> {
        find_pq_from_dm(&self.d, &self.m)
            .into_iter()
            .find_map(|(p, q)| {
                let qp = QuasiPerfectClass {
                    d: self.d.clone(),
                    m: self.m.clone(),
                    p,
                    q,
                };
                (qp.mvec() == self.mvec).then_some(qp)
            })
    }

    /// Intersection number `d d' - m m' - mvec . mvec'`.
    pub fn intersection(&self, other: &ExClass) -> BigInt {
        let dot: BigInt = self.mvec.iter().zip(&other.mvec).map(|(a, b)| a * b).sum();
        &self.d * &other.d - &self.m * &other.m - dot
    }
}

/// Run-length rendering `29^5,25,4^6,1^4`.
pub fn fmt_multiplicities(v: &[BigInt]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        parts.push(if j - i == 1 {
            v[i].to_string()
        } else {
            format!("{}^{}", v[i], j - i)
        });
        i = j;
    }
    parts.join(",")
}

impl fmt::Display for ExClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{};{})",
            self.d,
            self.m,
            fmt_multiplicities(&self.mvec)
        )
    }
}

impl FromStr for ExClass {
    type Err = Error;

    /// `d,m;p/q` (quasi-perfect) or `d,m;[29^5,25,4^6,1^4]`, optionally
    /// wrapped in parentheses.
    fn from_str(s: &str) -> Result<ExClass> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(&t);
        let bad = |why: &str| Error::Parse(format!("class {s:?}: {why}"));
        let (dm, rest) = t.split_once(';').ok_or_else(|| bad("expected 'd,m;...'"))?;
        let (d, m) = dm.split_once(',').ok_or_else(|| bad("expected 'd,m'"))?;
        let d: BigInt = d.parse().map_err(|_| bad("bad degree"))?;
        let m: BigInt = m.parse().map_err(|_| bad("bad m"))?;
        let body = rest.strip_prefix('[').and_then(|x| x.strip_suffix(']'));
        let list = body.map(str::to_string).or_else(|| {
            (!rest.contains('/') && rest.contains([',', '^'])).then(|| rest.to_string())
        });
        if let Some(list) = list {
            let mut mvec = Vec::new();
            for item in list.split(',').filter(|x| !x.is_empty()) {
                let (v, k) = item.split_once('^').unwrap_or((item, "1"));
                let v: BigInt = v.parse().map_err(|_| bad("bad multiplicity"))?;
                let k: usize = k.parse().map_err(|_| bad("bad repeat count"))?;
                mvec.extend(std::iter::repeat_n(v, k));
            }
            return Ok(ExClass::new(d, m, mvec));
        }
        let (p, q) = rest.split_once('/').unwrap_or((rest, "1"));
        let p: BigInt = p.parse().map_err(|_| bad("bad center numerator"))?;
        let q: BigInt = q.parse().map_err(|_| bad("bad center denominator"))?;
        Ok(ExClass::new(d, m, integral_weights(&p, &q)?))
    }
}

/// Class `(d, m; q w(p/q))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPerfectClass {
    pub d: BigInt,
    pub m: BigInt,
    pub p: BigInt,
    pub q: BigInt,
}

impl QuasiPerfectClass {
    pub fn center(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }

    pub fn mvec(&self) -> Vec<BigInt> {
        integral_weights(&self.p, &self.q).expect("validated center")
    }

    pub fn to_exclass(&self) -> ExClass {
        ExClass::new(self.d.clone(), self.m.clone(), self.mvec())
    }

    /// `m/d`.
    pub fn slope(&self) -> Rational {
        Rational::new(self.m.clone(), self.d.clone())
    }

    /// Index `(d(d+3) - m(m+1))/2` of the ECH capacity matching this class.
    pub fn ech_index(&self) -> BigInt {
        (&self.d * (&self.d + 3) - &self.m * (&self.m + 1)) / 2
    }

    /// `(z1, z2)`: the window around the center on which the closed form of
    /// the obstruction holds (closed at both ends by continuity).
    pub fn window(&self) -> (Rational, Rational) {
        let cf = rational_to_cf(&self.center()).expect("center > 1");
        let t = cf.terms();
        let mut plus = t.to_vec();
        *plus.last_mut().unwrap() += 1;
        let mut minus = t.to_vec();
        *minus.last_mut().unwrap() -= 1;
        let plus = ContinuedFraction::new(plus)
            .expect("positive terms")
            .value();
        let minus = if *minus.last().unwrap() == 0 {
            // only possible for an integer center 1, excluded by p > q
            Rational::one()
        } else {
            ContinuedFraction::new(minus)
                .expect("positive terms")
                .value()
        };
        if plus < minus {
            (plus, minus)
        } else {
            (minus, plus)
        }
    }
}

impl fmt::Display for QuasiPerfectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_one() {
            write!(f, "({},{};w({}))", self.d, self.m, self.p)
        } else {
            write!(
                f,
                "({},{};{}w({}/{}))",
                self.d, self.m, self.q, self.p, self.q
            )
        }
    }
}

/// Validates `(d, m; q w(p/q))` against both Diophantine identities.
pub fn make_quasi_perfect(d: BigInt, m: BigInt, p: BigInt, q: BigInt) -> Result<QuasiPerfectClass> {
    if !q.is_positive() || p <= q {
        return Err(Error::Domain(format!(
            "center needs p > q >= 1, got {p}/{q}"
        )));
    }
    if !p.gcd(&q).is_one() {
        return Err(Error::NotCoprime(p.to_string(), q.to_string()));
    }
    if &d * &d - &m * &m != &p * &q - 1 {
        return Err(Error::NotDiophantine(format!(
            "d^2 - m^2 = {} but pq - 1 = {}",
            &d * &d - &m * &m,
            &p * &q - 1
        )));
    }
    if BigInt::from(3) * &d != &m + &p + &q {
        return Err(Error::NotDiophantine(format!(
            "3d = {} but m + p + q = {}",
            BigInt::from(3) * &d,
            &m + &p + &q
        )));
    }
    Ok(QuasiPerfectClass { d, m, p, q })
}

/// Both identities `3d - m - sum m_i = 1` and `d^2 - m^2 - sum m_i^2 = -1`.
pub fn check_diophantine(c: &ExClass) -> bool {
    let (c1, si) = c.chern_and_self_intersection();
    c1.is_one() && si == BigInt::from(-1)
}

fn denominator(c: &ExClass, b: &Surd) -> Result<Surd> {
    let den = Surd::from_rational(Rational::from_integer(c.d.clone()))
        .try_sub(&b.scale(&Rational::from_integer(c.m.clone())))?;
    if !den.is_positive() {
        return Err(Error::DegenerateDenominator(den.to_string()));
    }
    Ok(den)
}

/// `mu_{c,b}(z)` at rational `z` and rational `b`.
pub fn mu_at(c: &ExClass, b: &Rational, z: &Rational) -> Result<Rational> {
    let den = Rational::from_integer(c.d.clone()) - Rational::from_integer(c.m.clone()) * b;
    if !den.is_positive() {
        return Err(Error::DegenerateDenominator(fmt_rational(&den)));
    }
    Ok(weight_expansion(z)?.dot(c.mvec()) / den)
}

/// `mu_{c,b}(z)` at rational `z` and any `b` in a quadratic field.
pub fn mu_at_surd_b(c: &ExClass, b: &Surd, z: &Rational) -> Result<Surd> {
    let num = Surd::from_rational(weight_expansion(z)?.dot(c.mvec()));
    num.try_div(&denominator(c, b)?)
}

/// Which closed form produced an obstruction value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `q z / (d - m b)`, left of the center.
    LeftLinear,
    /// `p / (d - m b)`, from the center on.
    RightConstant,
    /// Direct weight expansion at rational `z`.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionValue {
    pub value: Surd,
    pub regime: Regime,
}

/// Exact obstruction of a quasi-perfect class inside its center window.
pub fn mu_near_center(c: &QuasiPerfectClass, b: &Surd, z: &Surd) -> Result<ObstructionValue> {
    let (z1, z2) = c.window();
    let lo = Surd::from_rational(z1.clone());
    let hi = Surd::from_rational(z2.clone());
    if surd_cmp(z, &lo)? == Ordering::Less || surd_cmp(z, &hi)? == Ordering::Greater {
        return Err(Error::OutOfWindow {
            z: z.to_string(),
            low: fmt_rational(&z1),
            high: fmt_rational(&z2),
        });
    }
    let den = denominator(&c.to_exclass(), b)?;
    let a = Surd::from_rational(c.center());
    if surd_cmp(z, &a)? == Ordering::Less {
        let num = z.scale(&Rational::from_integer(c.q.clone()));
        Ok(ObstructionValue {
            value: num.try_div(&den)?,
            regime: Regime::LeftLinear,
        })
    } else {
        let num = Surd::from_rational(Rational::from_integer(c.p.clone()));
        Ok(ObstructionValue {
            value: num.try_div(&den)?,
            regime: Regime::RightConstant,
        })
    }
}

/// Obstruction at `(b, z)`: exact weight expansion for rational `z`,
/// the center-window formula otherwise.
pub fn obstruction_value(c: &QuasiPerfectClass, b: &Surd, z: &Surd) -> Result<ObstructionValue> {
    if let Some(zr) = z.as_rational() {
        if let Ok(v) = mu_near_center(c, b, z) {
            return Ok(v);
        }
        let value = mu_at_surd_b(&c.to_exclass(), b, zr)?;
        return Ok(ObstructionValue {
            value,
            regime: Regime::General,
        });
    }
    mu_near_center(c, b, z)
}

/// The volume bound `V_b(z) = sqrt(z / (1 - b^2))`, held through its square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeBound {
    b: Surd,
    z: Surd,
    squared: Surd,
}

impl VolumeBound {
    /// `V^2 = z / (1 - b^2)`.
    pub fn squared(&self) -> &Surd {
        &self.squared
    }

    /// Ordering of `x` against `V`.
    pub fn cmp_with(&self, x: &Surd) -> Result<Ordering> {
        if x.is_negative() {
            return Ok(Ordering::Less);
        }
        sqrt_cmp(x, &self.squared)
    }

    /// `V` itself when it lies in a quadratic field.
    pub fn exact(&self) -> Result<Option<Surd>> {
        self.squared.sqrt()
    }

    /// `(1 + z) / (3 - b)`, which equals `V` exactly when `z = acc(b)`.
    pub fn acc_identity_form(&self) -> Result<Surd> {
        self.z
            .add_rational(&Rational::one())
            .try_div(&(-&self.b).add_rational(&int(3)))
    }
}

pub fn volume_bound(b: &Surd, z: &Surd) -> Result<VolumeBound> {
    if b.is_negative() || surd_cmp(b, &Surd::one())? != Ordering::Less {
        return Err(Error::Domain(format!("b = {b} is outside [0, 1)")));
    }
    if z.is_negative() {
        return Err(Error::Domain(format!("z = {z} is negative")));
    }
    let one_minus = (-b.square()).add_rational(&Rational::one());
    let squared = z.try_div(&one_minus)?;
    Ok(VolumeBound {
        b: b.clone(),
        z: z.clone(),
        squared,
    })
}

/// Whether `mu_{c,b}(z) > V_b(z)`.
pub fn nontrivial_at(c: &ExClass, b: &Surd, z: &Surd) -> Result<bool> {
    let v = volume_bound(b, z)?;
    let mu = match z.as_rational() {
        Some(zr) => mu_at_surd_b(c, b, zr)?,
        None => {
            let qp = c.as_quasi_perfect().ok_or_else(|| {
                Error::Domain("obstruction at irrational z needs a quasi-perfect class".into())
            })?;
            mu_near_center(&qp, b, z)?.value
        }
    };
    Ok(v.cmp_with(&mu)? == Ordering::Greater)
}

/// `|b d - m| < sqrt(1 - b^2)`.
pub fn is_b_perfect(c: &QuasiPerfectClass, b: &Surd) -> Result<bool> {
    let lhs = b
        .scale(&Rational::from_integer(c.d.clone()))
        .add_rational(&-Rational::from_integer(c.m.clone()))
        .abs();
    let rhs = (-b.square()).add_rational(&Rational::one());
    if rhs.is_negative() {
        return Err(Error::Domain(format!("b = {b} exceeds 1")));
    }
    Ok(sqrt_cmp(&lhs, &rhs)? == Ordering::Less)
}

/// Which side of `r/s` the parameter `b` is tested on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s {
            "below" => Ok(Side::Below),
            "above" => Ok(Side::Above),
            _ => Err(Error::Parse(format!(
                "side must be 'below' or 'above', got {s:?}"
            ))),
        }
    }
}

/// Sufficient liveness interval for `b` relative to classes on one side of
/// `r/s`. With `Side::Below` the interval is
/// `(m^2 - 1)/(dm) <= b <= (s + m(rd - sm))/(r + d(rd - sm))` for `b < r/s`
/// (with `r = s` this is the plain liveness interval); with `Side::Above`
/// it is `(m(sm - rd) - s)/(d(sm - rd) - r) <= b <= m/d` for `b > r/s`,
/// which also requires `m/d > (r/s)(1 + 1/d^2)`.
pub fn live_condition(c: &QuasiPerfectClass, b: &Surd, r: u64, s: u64, side: Side) -> Result<bool> {
    if r == 0 || s == 0 || r > s {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r/s <= 1, got {r}/{s}"
        )));
    }
    let (d, m) = (
        Rational::from_integer(c.d.clone()),
        Rational::from_integer(c.m.clone()),
    );
    let (rr, ss) = (int(r as i64), int(s as i64));
    let rs = Surd::from_rational(&rr / &ss);
    let ge = |x: &Rational| -> Result<bool> {
        Ok(surd_cmp(b, &Surd::from_rational(x.clone()))? != Ordering::Less)
    };
    let le = |x: &Rational| -> Result<bool> {
        Ok(surd_cmp(b, &Surd::from_rational(x.clone()))? != Ordering::Greater)
    };
    match side {
        Side::Below => {
            if r != s && surd_cmp(b, &rs)? != Ordering::Less {
                return Ok(false);
            }
            let lower_ok = m.is_zero() || ge(&((&m * &m - int(1)) / (&d * &m)))?;
            let k = &rr * &d - &ss * &m;
            let upper = (&ss + &m * &k) / (&rr + &d * &k);
            Ok(lower_ok && le(&upper)?)
        }
        Side::Above => {
            if surd_cmp(b, &rs)? != Ordering::Greater {
                return Ok(false);
            }
            if m.clone() / &d <= &rr / &ss * (int(1) + int(1) / (&d * &d)) {
                return Ok(false);
            }
            let k = &ss * &m - &rr * &d;
            let lower = (&m * &k - &ss) / (&d * &k - &rr);
            Ok(ge(&lower)? && le(&(&m / &d))?)
        }
    }
}

/// Center-blocking test: at `b0 = acc^{-1}(a)` on the branch of `m/d`,
/// `mu(a) = p / (d - m b0)` exceeds `V_{b0}(a) = (1 + a)/(3 - b0)`.
pub fn center_blocking_test(c: &QuasiPerfectClass) -> Result<bool> {
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    let branch = match c.slope().cmp(&third) {
        Ordering::Less => Branch::L,
        Ordering::Greater => Branch::U,
        Ordering::Equal => return Err(Error::AmbiguousBranch),
    };
    let a = c.center();
    let b0 = match acc_inv(&a, branch) {
        Ok(b) => b,
        Err(Error::OutOfBranchRange(..)) => return Err(Error::CenterOutOfRange(fmt_rational(&a))),
        Err(e) => return Err(e),
    };
    let den = denominator(&c.to_exclass(), &b0)?;
    let lhs = (-&b0)
        .add_rational(&int(3))
        .scale(&Rational::from_integer(c.p.clone()));
    let rhs = den.scale(&(&a + int(1)));
    Ok(surd_cmp(&lhs, &rhs)? == Ordering::Greater)
}

/// All `(d, m)` with `d, m >= 0` and `(d(d+3) - m(m+1))/2 = k`, ascending in `d`.
pub fn find_dm_from_k(k: u64) -> Vec<(u64, u64)> {
    let k = k as u128;
    let mut out = Vec::new();
    for d in 0..=k {
        let t = d * (d + 3);
        if t < 2 * k {
            continue;
        }
        let rhs = t - 2 * k; // m(m+1)
        let m = ((4 * rhs + 1).isqrt() - 1) / 2;
        if m * (m + 1) == rhs {
            out.push((d as u64, m as u64));
        }
    }
    out
}

/// All coprime `(p, q)` with `p > q >= 1`, `pq = d^2 - m^2 + 1` and
/// `p + q = 3d - m`.
pub fn find_pq_from_dm(d: &BigInt, m: &BigInt) -> Vec<(BigInt, BigInt)> {
    let prod: BigInt = d * d - m * m + 1;
    let sum: BigInt = BigInt::from(3) * d - m;
    if !prod.is_positive() || !sum.is_positive() {
        return Vec::new();
    }
    let disc = &sum * &sum - BigInt::from(4) * &prod;
    let Some(r) = exact_isqrt(&disc) else {
        return Vec::new();
    };
    if r.is_zero() || (&sum + &r).is_odd() {
        return Vec::new();
    }
    let p: BigInt = (&sum + &r) / 2;
    let q: BigInt = (&sum - &r) / 2;
    if q >= BigInt::one() && p.gcd(&q).is_one() {
        vec![(p, q)]
    } else {
        Vec::new()
    }
}

/// All `(d, m)` with `d, m >= 0` making `(d, m; q w(p/q))` quasi-perfect.
pub fn find_dm_from_pq(p: &BigInt, q: &BigInt) -> Vec<(BigInt, BigInt)> {
    let s = p + q;
    let disc = &s * &s - BigInt::from(8) * p * q + BigInt::from(8);
    let Some(r) = exact_isqrt(&disc) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let three_s = BigInt::from(3) * &s;
    let mut cands = vec![&three_s - &r];
    if !r.is_zero() {
        cands.push(&three_s + &r);
    }
    for num in cands {
        if !(&num % BigInt::from(8)).is_zero() {
            continue;
        }
        let d: BigInt = num / 8;
        let m = BigInt::from(3) * &d - &s;
        if !d.is_negative() && !m.is_negative() {
            out.push((d, m));
        }
    }
    out
}

/// A quasi-perfect class found by search, with its center's expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassRecord {
    pub d: BigInt,
    pub m: BigInt,
    pub p: BigInt,
    pub q: BigInt,
    pub cf: ContinuedFraction,
}

/// Every quasi-perfect class whose center lies strictly inside
/// `(z_low, z_high)` with denominator in `[q_min, q_max]`.
pub fn classes_with_cf_in_range(
    z_low: &Rational,
    z_high: &Rational,
    q_min: u64,
    q_max: u64,
) -> Result<Vec<ClassRecord>> {
    if *z_low <= Rational::one() || z_low >= z_high {
        return Err(Error::Domain("need 1 < z_low < z_high".into()));
    }
    if q_min == 0 || q_min > q_max {
        return Err(Error::Domain("need 1 <= q_min <= q_max".into()));
    }
    let mut out: Vec<ClassRecord> = (q_min..=q_max)
        .into_par_iter()
        .flat_map_iter(|q| {
            let qb = BigInt::from(q);
            let qr = Rational::from_integer(qb.clone());
            let p_lo: BigInt = rat_floor(&(z_low * &qr)) + 1;
            let p_hi = rat_ceil(&(z_high * &qr)) - 1;
            let mut found = Vec::new();
            let mut p = p_lo;
            while p <= p_hi {
                if p.gcd(&qb).is_one() {
                    for (d, m) in find_dm_from_pq(&p, &qb) {
                        let cf = rational_to_cf(&Rational::new(p.clone(), qb.clone()))
                            .expect("center > 1");
                        found.push(ClassRecord {
                            d,
                            m,
                            p: p.clone(),
                            q: qb.clone(),
                            cf,
                        });
                    }
                }
                p += 1;
            }
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Quasi-perfect `(d, m)` at the value of `head ++ ending`.
pub fn search_ending(head: &[u64], ending: &[u64]) -> Result<Vec<(BigInt, BigInt)>> {
    let mut t = head.to_vec();
    t.extend_from_slice(ending);
    let z = ContinuedFraction::new(t)?.value();
    if z <= Rational::one() {
        return Ok(Vec::new());
    }
    Ok(find_dm_from_pq(z.numer(), z.denom()))
}

/// Outcome of the mechanical overshadowing checks for one `(d', m')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OvershadowVerdict {
    Excluded(String),
    NeedsReview,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvershadowCandidate {
    pub d: u64,
    pub m: u64,
    pub verdict: OvershadowVerdict,
}

/// Degree/slope pairs that could overshadow a staircase with limit
/// `b_inf`, without break-point information.
pub fn overshadow_candidates(
    b_inf: &Surd,
    r: u64,
    s: u64,
    side: Side,
) -> Result<Vec<OvershadowCandidate>> {
    overshadow_candidates_with_breaks(b_inf, r, s, side, &[])
}

/// As [`overshadow_candidates`], additionally testing whether a multiplicity
/// vector constant on the blocks of each supplied break point (with the
/// final entry allowed to move by one) can satisfy both Diophantine
/// identities.
pub fn overshadow_candidates_with_breaks(
    b_inf: &Surd,
    r: u64,
    s: u64,
    side: Side,
    breaks: &[Rational],
) -> Result<Vec<OvershadowCandidate>> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument("r and s must be positive".into()));
    }
    let rs = Surd::from_rational(Rational::new(BigInt::from(r), BigInt::from(s)));
    let gap = match side {
        Side::Below => rs.try_sub(b_inf)?,
        Side::Above => b_inf.try_sub(&rs)?,
    };
    if !gap.is_positive() {
        return Err(Error::Domain(format!(
            "b_inf = {b_inf} is not on the {side:?} side of {r}/{s}"
        )));
    }
    // d' < s / (s * gap)
    let scaled_gap = gap.scale(&int(s as i64));
    let s_sur = Surd::from_int(s as i64);
    let mut out = Vec::new();
    let mut dp: u64 = 1;
    loop {
        if surd_cmp(&scaled_gap.scale(&int(dp as i64)), &s_sur)? != Ordering::Less {
            break;
        }
        for mp in 0..=dp {
            let far = match side {
                Side::Below => (s as u128) * (mp as u128) > (r as u128) * (dp as u128),
                Side::Above => (s as u128) * (mp as u128) < (r as u128) * (dp as u128),
            };
            if !far {
                continue;
            }
            let dist = b_inf
                .scale(&int(dp as i64))
                .add_rational(&-int(mp as i64))
                .abs();
            if surd_cmp(&dist, &Surd::one())? != Ordering::Less {
                continue;
            }
            let verdict = overshadow_verdict(dp, mp, breaks);
            out.push(OvershadowCandidate {
                d: dp,
                m: mp,
                verdict,
            });
        }
        dp += 1;
    }
    out.sort_by_key(|c| std::cmp::Reverse((c.d, c.m)));
    Ok(out)
}

fn overshadow_verdict(d: u64, m: u64, breaks: &[Rational]) -> OvershadowVerdict {
    let (d, m) = (d as i128, m as i128);
    let lin = 3 * d - m - 1;
    let quad = d * d - m * m + 1;
    if lin < 0 || quad < 0 {
        return OvershadowVerdict::Excluded("negative Diophantine budget".into());
    }
    if lin > quad {
        return OvershadowVerdict::Excluded(format!(
            "sum of multiplicities {lin} exceeds square budget {quad}"
        ));
    }
    if breaks.is_empty() {
        return OvershadowVerdict::NeedsReview;
    }
    let mut tried = Vec::new();
    for a in breaks {
        let Ok(cf) = rational_to_cf(a) else { continue };
        let blocks: Vec<i128> = cf.terms().iter().map(|&t| t as i128).collect();
        if block_vector_exists(&blocks, lin, quad) {
            return OvershadowVerdict::NeedsReview;
        }
        tried.push(cf.to_string());
    }
    OvershadowVerdict::Excluded(format!(
        "no block-constant multiplicities for break points {}",
        tried.join(" ")
    ))
}

/// Nonincreasing `x_j >= 0` constant on blocks of the given lengths, last
/// entry shifted by `eps` in {-1, 0, 1}, with sum `lin` and square sum `quad`.
fn block_vector_exists(blocks: &[i128], lin: i128, quad: i128) -> bool {
    fn rec(blocks: &[i128], j: usize, cap: i128, lin: i128, quad: i128) -> bool {
        if j + 1 == blocks.len() {
            let l = blocks[j];
            for x in 0..=cap {
                for eps in -1i128..=1 {
                    let last = x + eps;
                    if last < 0 {
                        continue;
                    }
                    if l * x + eps == lin && (l - 1) * x * x + last * last == quad {
                        return true;
                    }
                }
            }
            return false;
        }
        let l = blocks[j];
        for x in 0..=cap {
            if l * x > lin + 1 || l * x * x > quad + 1 {
                break;
            }
            if rec(blocks, j + 1, x, lin - l * x, quad - l * x * x) {
                return true;
            }
        }
        false
    }
    let cap = quad.max(0).isqrt() + 1;
    !blocks.is_empty() && rec(blocks, 0, cap, lin, quad)
}

/// Numeric value of an obstruction for plotting.
pub fn obstruction_f64(v: &ObstructionValue) -> f64 {
    v.value.to_f64()
}

/// Convenience: `u64` view of a small nonnegative integer.
pub fn small(x: &BigInt) -> Option<u64> {
    x.to_u64()
}
