//! Pre-staircase families `U`, `L`, `E` in both directions, their limits,
//! the blocking classes they accumulate to, and the `b = 1/3` staircase.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cfweights::ContinuedFraction;
use crate::classes::{make_quasi_perfect, QuasiPerfectClass};
use crate::error::{Error, Result};
use crate::exactnum::{int, surd_cmp, Rational, Surd};
use crate::staircase::acc::is_acc_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    U,
    L,
    E,
}

/// `Lower` steps approach the limit from below (`l`), `Upper` from above (`u`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Lower,
    Upper,
}

/// Final CF entries: `2n + 4` or `(2n + 5, 2n + 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ending {
    Short,
    Long,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StairFamilySpec {
    pub family: Family,
    pub direction: Direction,
    pub n: u32,
    pub ending: Ending,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::U => "U",
            Family::L => "L",
            Family::E => "E",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "U" => Ok(Family::U),
            "L" => Ok(Family::L),
            "E" => Ok(Family::E),
            _ => Err(Error::Parse(format!("family must be U, L or E, got {s:?}"))),
        }
    }
}

impl fmt::Display for StairFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Lower => "l",
            Direction::Upper => "u",
        };
        let end = match self.ending {
            Ending::Short => "short",
            Ending::Long => "long",
        };
        write!(f, "{}:{}:{}:{}", self.family, dir, self.n, end)
    }
}

impl FromStr for StairFamilySpec {
    type Err = Error;

    /// `F:dir:n:end`, e.g. `U:u:0:short`; `dir` is `l` (or `ℓ`) or `u`.
    fn from_str(s: &str) -> Result<StairFamilySpec> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::Parse(format!("family spec {s:?}: expected F:dir:n:end"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let family = parts[0].parse()?;
        let direction = match parts[1] {
            "l" | "ℓ" | "lower" => Direction::Lower,
            "u" | "upper" => Direction::Upper,
            _ => return Err(bad()),
        };
        let n = parts[2].parse().map_err(|_| bad())?;
        let ending = match parts[3] {
            "short" => Ending::Short,
            "long" => Ending::Long,
            _ => return Err(bad()),
        };
        StairFamilySpec::new(family, direction, n, ending)
    }
}

impl StairFamilySpec {
    /// Checks the index range of the family (`n >= 1` for `U/l`, `L/u`,
    /// `E/l`; `n >= 0` otherwise, with `L/l` at `n = 0` the Fibonacci
    /// staircase, which has no blocking class).
    pub fn new(
        family: Family,
        direction: Direction,
        n: u32,
        ending: Ending,
    ) -> Result<StairFamilySpec> {
        let nmin = match (family, direction) {
            (Family::U, Direction::Lower)
            | (Family::L, Direction::Upper)
            | (Family::E, Direction::Lower) => 1,
            _ => 0,
        };
        if n < nmin {
            return Err(Error::InvalidArgument(format!(
                "{family}/{direction:?} needs n >= {nmin}"
            )));
        }
        Ok(StairFamilySpec {
            family,
            direction,
            n,
            ending,
        })
    }

    /// All six family/direction combinations.
    pub fn kinds() -> [(Family, Direction); 6] {
        use Direction::*;
        use Family::*;
        [
            (U, Lower),
            (U, Upper),
            (L, Lower),
            (L, Upper),
            (E, Lower),
            (E, Upper),
        ]
    }

    /// `sigma_n = (2n + 1)(2n + 5)`.
    pub fn sigma(&self) -> BigInt {
        let n = BigInt::from(self.n);
        (BigInt::from(2) * &n + 1) * (BigInt::from(2) * &n + 5)
    }

    /// `r/s` for which the limit inequality is checked.
    pub fn default_rs(&self) -> (u64, u64) {
        match (self.family, self.direction) {
            (Family::U, Direction::Lower) => (1, 1),
            (Family::U, Direction::Upper) => (1, 2),
            (Family::L, Direction::Lower) => (7, 10),
            (Family::L, Direction::Upper) => (3, 10),
            (Family::E, Direction::Lower) => (1, 2),
            (Family::E, Direction::Upper) => (1, 3),
        }
    }

    /// CF terms of the `k`-th center.
    pub fn center_terms(&self, k: usize) -> Vec<u64> {
        let n = self.n as u64;
        let mut t: Vec<u64> = match (self.family, self.direction) {
            (Family::U, Direction::Lower) => vec![],
            (Family::U, Direction::Upper) => vec![2 * n + 7],
            (Family::L, Direction::Lower) => vec![6, 2 * n + 1],
            (Family::L, Direction::Upper) => vec![6, 2 * n - 1, 2 * n + 1],
            (Family::E, Direction::Lower) => vec![5, 1, 2 * n + 4, 2 * n + 1],
            (Family::E, Direction::Upper) => vec![5, 1, 2 * n + 6],
        };
        for _ in 0..k {
            t.extend([2 * n + 5, 2 * n + 1]);
        }
        match self.ending {
            Ending::Short => t.push(2 * n + 4),
            Ending::Long => t.extend([2 * n + 5, 2 * n + 2]),
        }
        t
    }

    /// `(R1, R2)` in the relation `(2n + 3) d = R1 p + R2 q`.
    pub fn relation(&self) -> (BigInt, BigInt) {
        let n = self.n as i64;
        let (a, b) = match (self.family, self.direction) {
            (Family::U, Direction::Lower) => (n + 1, n + 2),
            (Family::U, Direction::Upper) => (n + 2, -(n + 4)),
            (Family::L, Direction::Lower) => (n + 1, -(n - 1)),
            (Family::L, Direction::Upper) => (-(n - 1), 11 * n + 2),
            (Family::E, Direction::Lower) => (n + 2, -(n + 4)),
            (Family::E, Direction::Upper) => (-(n + 4), 11 * n + 31),
        };
        (BigInt::from(a), BigInt::from(b))
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(2 * self.n as i64 + 3)
    }

    fn tuple_from_pq(&self, p: BigInt, q: BigInt) -> Result<(BigInt, BigInt, BigInt, BigInt)> {
        let (r1, r2) = self.relation();
        let num = r1 * &p + r2 * &q;
        let md = self.modulus();
        if !(&num % &md).is_zero() {
            return Err(Error::DivisibilityFailure {
                d: format!("{p}/{q}"),
                modulus: md.to_string(),
                numerator: num.to_string(),
            });
        }
        let d = num / md;
        let m = BigInt::from(3) * &d - &p - &q;
        Ok((d, m, p, q))
    }

    /// `k`-th class of the pre-staircase.
    pub fn class(&self, k: usize) -> Result<QuasiPerfectClass> {
        let z = ContinuedFraction::new(self.center_terms(k))?.value();
        let (d, m, p, q) = self.tuple_from_pq(z.numer().clone(), z.denom().clone())?;
        make_quasi_perfect(d, m, p, q)
    }
}

/// Classes `k = 0..=k_max` of a pre-staircase.
pub fn prestaircase_generate(
    spec: &StairFamilySpec,
    k_max: usize,
) -> Result<Vec<QuasiPerfectClass>> {
    (0..=k_max).into_par_iter().map(|k| spec.class(k)).collect()
}

/// The tuple at `k = -1` obtained by running the recursion backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRow {
    pub d: BigInt,
    pub m: BigInt,
    pub p: BigInt,
    pub q: BigInt,
    /// Whether the row is itself a quasi-perfect class.
    pub quasi_perfect: bool,
}

/// Backward extension for the specs that admit one (`L/u` with the short
/// ending and `E/l`); `None` for the others.
pub fn prestaircase_extension(spec: &StairFamilySpec) -> Result<Option<ExtensionRow>> {
    let admits = matches!(
        (spec.family, spec.direction, spec.ending),
        (Family::L, Direction::Upper, Ending::Short) | (Family::E, Direction::Lower, _)
    );
    if !admits {
        return Ok(None);
    }
    let c0 = spec.class(0)?;
    let c1 = spec.class(1)?;
    let t = spec.sigma() + 2;
    let back = |x0: &BigInt, x1: &BigInt| -> BigInt { &t * x0 - x1 };
    let (d, m, p, q) = (
        back(&c0.d, &c1.d),
        back(&c0.m, &c1.m),
        back(&c0.p, &c1.p),
        back(&c0.q, &c1.q),
    );
    let quasi_perfect = make_quasi_perfect(d.clone(), m.clone(), p.clone(), q.clone()).is_ok();
    Ok(Some(ExtensionRow {
        d,
        m,
        p,
        q,
        quasi_perfect,
    }))
}

/// `x_{k+1} = (sigma + 2) x_k - x_{k-1}` for all four coordinates.
pub fn recursion_holds(classes: &[QuasiPerfectClass], sigma: &BigInt) -> bool {
    let t = sigma + 2;
    classes.windows(3).all(|w| {
        let f = |g: fn(&QuasiPerfectClass) -> &BigInt| *g(&w[2]) == &t * g(&w[1]) - g(&w[0]);
        f(|c| &c.d) && f(|c| &c.m) && f(|c| &c.p) && f(|c| &c.q)
    })
}

/// Closed forms `x_k = X lambda^k + conj(X) conj(lambda)^k` of a
/// pre-staircase, with `b_inf = M/D` and `a_inf = P/Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrestairLimits {
    pub lambda: Surd,
    pub d: Surd,
    pub m: Surd,
    pub p: Surd,
    pub q: Surd,
    pub b_inf: Surd,
    pub a_inf: Surd,
    /// `acc(b_inf) = a_inf`, checked through the accumulation quadratic.
    pub acc_verified: bool,
}

impl PrestairLimits {
    /// `X lambda^k + conj(X) conj(lambda)^k`, which is rational.
    pub fn term(x: &Surd, lambda: &Surd, k: u32) -> Rational {
        let v = x.try_mul(&lambda.pow(k)).expect("shared field");
        let w = v.try_add(&v.conjugate()).expect("shared field");
        w.as_rational().cloned().expect("trace is rational")
    }
}

fn coefficient(x0: &BigInt, x1: &BigInt, sigma: &BigInt, modulus: &BigInt) -> Surd {
    let s = Rational::from_integer(sigma.clone());
    let a = Rational::new(x0.clone(), BigInt::from(2));
    let c = Rational::from_integer(BigInt::from(2) * x1 - x0 * (sigma + 2))
        / (int(2) * Rational::from_integer(modulus.clone()) * &s);
    Surd::new(a, c, s).expect("positive sigma")
}

pub fn prestaircase_limits(spec: &StairFamilySpec) -> Result<PrestairLimits> {
    let c0 = spec.class(0)?;
    let c1 = spec.class(1)?;
    let sigma = spec.sigma();
    let md = spec.modulus();
    let s = Rational::from_integer(sigma.clone());
    let lambda = Surd::new(
        Rational::from_integer(&sigma + 2) / int(2),
        Rational::from_integer(md.clone()) / int(2),
        s,
    )?;
    let d = coefficient(&c0.d, &c1.d, &sigma, &md);
    let m = coefficient(&c0.m, &c1.m, &sigma, &md);
    let p = coefficient(&c0.p, &c1.p, &sigma, &md);
    let q = coefficient(&c0.q, &c1.q, &sigma, &md);
    let b_inf = m.try_div(&d)?;
    let a_inf = p.try_div(&q)?;
    let acc_verified = is_acc_point(&b_inf, &a_inf)?;
    Ok(PrestairLimits {
        lambda,
        d,
        m,
        p,
        q,
        b_inf,
        a_inf,
        acc_verified,
    })
}

/// Outcome of the limit inequality
/// `|m1 d0 - m0 d1| / (2n + 3) <= sqrt(sigma) (sD - rM) / |sM - rD|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DminCheck {
    pub holds: bool,
    /// `m1 d0 - m0 d1`; its sign gives the direction in which `m_k/d_k` moves.
    pub cross: BigInt,
    pub lhs: Rational,
    pub rhs: Surd,
}

pub fn dmin1_check(spec: &StairFamilySpec, r: u64, s: u64) -> Result<DminCheck> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument("r and s must be positive".into()));
    }
    let lim = prestaircase_limits(spec)?;
    let c0 = spec.class(0)?;
    let c1 = spec.class(1)?;
    let cross = &c1.m * &c0.d - &c0.m * &c1.d;
    let lhs = Rational::new(cross.abs(), spec.modulus());
    let (rr, ss) = (int(r as i64), int(s as i64));
    let num = lim.d.scale(&ss).try_sub(&lim.m.scale(&rr))?;
    let den = lim.m.scale(&ss).try_sub(&lim.d.scale(&rr))?.abs();
    if den.is_zero() {
        return Err(Error::DegenerateDenominator(format!(
            "sM - rD vanishes for r/s = {r}/{s}"
        )));
    }
    let root = Surd::new(
        Rational::zero(),
        Rational::one(),
        Rational::from_integer(spec.sigma()),
    )?;
    let rhs = root.try_mul(&num)?.try_div(&den)?;
    let holds = surd_cmp(&Surd::from_rational(lhs.clone()), &rhs)? != Ordering::Greater;
    Ok(DminCheck {
        holds,
        cross,
        lhs,
        rhs,
    })
}

/// Blocking class of family `f` at index `n`:
/// `U: (n+3, n+2; w(2n+6))`, `L: (5n, n-1; 2n w((12n+1)/(2n)))` for `n >= 1`,
/// `E: (5(n+3), n+4; (2n+6) w((12n+35)/(2n+6)))`.
pub fn blocking_class(f: Family, n: u32) -> Result<QuasiPerfectClass> {
    let n = BigInt::from(n);
    let b = BigInt::from;
    match f {
        Family::U => make_quasi_perfect(&n + 3, &n + 2, b(2) * &n + 6, b(1)),
        Family::L => {
            if n.is_zero() {
                return Err(Error::InvalidArgument(
                    "the L blocking classes start at n = 1".into(),
                ));
            }
            make_quasi_perfect(b(5) * &n, &n - 1, b(12) * &n + 1, b(2) * &n)
        }
        Family::E => make_quasi_perfect(b(5) * (&n + 3), &n + 4, b(12) * &n + 35, b(2) * &n + 6),
    }
}

/// The three pre-staircases at `b = 1/3`: centers `g_k / g_{k-1}` with
/// `g_{k+1} = 6 g_k - g_{k-1}` from seeds `(1, 2)`, `(1, 4)`, `(1, 5)`;
/// `3d - m = g_k + g_{k-1}` and `d - 3m = e_k` with
/// `e_k = -(-1)^k`, `(-1)^k`, `-2(-1)^k` respectively.
pub fn staircase_one_third(i: u8, k_max: usize) -> Result<Vec<QuasiPerfectClass>> {
    let (g0, g1) = match i {
        0 => (1, 2),
        1 => (1, 4),
        2 => (1, 5),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "sequence index must be 0, 1 or 2, got {i}"
            )))
        }
    };
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut g = vec![BigInt::from(g0), BigInt::from(g1)];
    while g.len() <= k_max {
        let n = g.len();
        g.push(BigInt::from(6) * &g[n - 1] - &g[n - 2]);
    }
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
        let e = BigInt::from(match i {
            0 => -sign,
            1 => sign,
            _ => -2 * sign,
        });
        let (p, q) = (g[k].clone(), g[k - 1].clone());
        let s = &p + &q;
        let num = &s - BigInt::from(3) * &e;
        if !num.is_multiple_of(&BigInt::from(8)) {
            return Err(Error::DivisibilityFailure {
                d: format!("k = {k}"),
                modulus: "8".into(),
                numerator: num.to_string(),
            });
        }
        let m = num / 8;
        let d = BigInt::from(3) * &m + &e;
        out.push(make_quasi_perfect(d, m, p, q)?);
    }
    Ok(out)
}
