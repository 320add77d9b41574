//! The accumulation-point function and its inverse branches.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    fmt_rational, int, rational_decimal, surd_cmp, surd_normalize, Rational, Surd,
};

/// The two inverse branches of `acc`, split at `b = 1/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `b < 1/3`
    L,
    /// `b > 1/3`
    U,
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Branch> {
        match s {
            "L" | "l" => Ok(Branch::L),
            "U" | "u" => Ok(Branch::U),
            _ => Err(Error::Parse(format!("branch must be L or U, got {s:?}"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::L => "L",
            Branch::U => "U",
        })
    }
}

/// A real number that is either an exact surd or a rational approximation
/// with an explicit error bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealValue {
    Exact(Surd),
    Approx { value: Rational, error: Rational },
}

impl RealValue {
    pub fn exact(&self) -> Option<&Surd> {
        match self {
            RealValue::Exact(s) => Some(s),
            RealValue::Approx { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealValue::Exact(_))
    }

    /// Rational point estimate.
    pub fn estimate(&self, digits: u32) -> Rational {
        match self {
            RealValue::Exact(s) => s.approx(digits),
            RealValue::Approx { value, .. } => value.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Exact(s) => s.to_f64(),
            RealValue::Approx { value, .. } => Surd::from_rational(value.clone()).to_f64(),
        }
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        match self {
            RealValue::Exact(s) => s.to_decimal(sig),
            RealValue::Approx { value, .. } => rational_decimal(value, sig),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(s) => write!(f, "{s}"),
            RealValue::Approx { value, .. } => write!(f, "~{}", rational_decimal(value, 40)),
        }
    }
}

pub type AccValue = RealValue;

const APPROX_DIGITS: u32 = 60;

fn ten_pow(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), d as usize)
}

/// Square root of a positive surd: exact in the same field when possible,
/// otherwise a rational within `10^-APPROX_DIGITS`.
pub(crate) fn sqrt_or_approx(x: &Surd) -> Result<RealValue> {
    if let Some(r) = x.sqrt()? {
        return Ok(RealValue::Exact(r));
    }
    let scale = ten_pow(APPROX_DIGITS);
    let scaled = x.scale(&Rational::from_integer(&scale * &scale)).floor();
    let root = scaled.sqrt();
    let value = Rational::new(root, scale.clone());
    Ok(RealValue::Approx {
        value,
        error: Rational::new(BigInt::from(2), scale),
    })
}

fn check_b(b: &Surd) -> Result<()> {
    if b.is_negative() || surd_cmp(b, &Surd::one())? != Ordering::Less {
        return Err(Error::Domain(format!("b = {b} is outside [0, 1)")));
    }
    Ok(())
}

/// `c(b) = (3 - b)^2 / (1 - b^2) - 2`, the middle coefficient of the
/// accumulation quadratic `z^2 - c z + 1`.
pub fn acc_coefficient(b: &Surd) -> Result<Surd> {
    check_b(b)?;
    let three_minus = (-b).add_rational(&int(3));
    let one_minus_sq = (-b.square()).add_rational(&Rational::one());
    Ok(three_minus
        .square()
        .try_div(&one_minus_sq)?
        .add_rational(&int(-2)))
}

/// Root `> 1` of `z^2 - c(b) z + 1 = 0`.
pub fn acc(b: &Surd) -> Result<AccValue> {
    let c = acc_coefficient(b)?;
    let disc = c.square().add_rational(&int(-4));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if let Some(cr) = c.as_rational() {
        return Ok(RealValue::Exact(surd_normalize(
            cr * &half,
            half,
            disc.as_rational().unwrap().clone(),
        )));
    }
    match sqrt_or_approx(&disc)? {
        RealValue::Exact(r) => Ok(RealValue::Exact(c.try_add(&r)?.scale(&half))),
        RealValue::Approx { value, error } => {
            let cv = c.approx(APPROX_DIGITS);
            let value = (cv + value) * &half;
            Ok(RealValue::Approx { value, error })
        }
    }
}

/// Whether `z = acc(b)`, decided from `(1 + z)^2 (1 - b^2) = z (3 - b)^2`
/// with `z > 1`.
pub fn is_acc_point(b: &Surd, z: &Surd) -> Result<bool> {
    check_b(b)?;
    if surd_cmp(z, &Surd::one())? != Ordering::Greater {
        return Ok(false);
    }
    let lhs = z
        .add_rational(&Rational::one())
        .square()
        .try_mul(&(-b.square()).add_rational(&Rational::one()))?;
    let rhs = z.try_mul(&(-b).add_rational(&int(3)).square())?;
    Ok(lhs == rhs)
}

fn branch_err(z: &impl fmt::Display, branch: Branch) -> Error {
    Error::OutOfBranchRange(z.to_string(), branch.to_string())
}

/// `b = (3 +- sqrt(l^2 - 8l)) / (l + 1)` with `l = z + 1/z + 2`, for any `z`
/// in a quadratic field; the root may fall outside that field.
pub fn acc_inv_surd(z: &Surd, branch: Branch) -> Result<RealValue> {
    if surd_cmp(z, &Surd::one())? != Ordering::Greater {
        return Err(branch_err(z, branch));
    }
    let l = z.try_add(&z.recip()?)?.add_rational(&int(2));
    let rad = l.try_mul(&l.add_rational(&int(-8)))?;
    if rad.is_negative() {
        return Err(branch_err(z, branch));
    }
    let sign = match branch {
        Branch::L => int(-1),
        Branch::U => int(1),
    };
    let den = l.add_rational(&int(1));
    let b = match sqrt_or_approx(&rad)? {
        RealValue::Exact(r) => {
            RealValue::Exact(r.scale(&sign).add_rational(&int(3)).try_div(&den)?)
        }
        RealValue::Approx { value, error } => {
            let d = den.approx(APPROX_DIGITS);
            let v = (int(3) + &sign * value) / &d;
            RealValue::Approx {
                value: v,
                error: error * int(2),
            }
        }
    };
    let nonneg = match &b {
        RealValue::Exact(s) => !s.is_negative(),
        RealValue::Approx { value, error } => value + error >= Rational::zero(),
    };
    if !nonneg {
        return Err(branch_err(z, branch));
    }
    Ok(b)
}

/// Exact inverse of `acc` at a rational point on the chosen branch.
pub fn acc_inv(z: &Rational, branch: Branch) -> Result<Surd> {
    match acc_inv_surd(&Surd::from_rational(z.clone()), branch) {
        Ok(RealValue::Exact(b)) => Ok(b),
        Ok(RealValue::Approx { .. }) => unreachable!("square roots of rationals are exact"),
        Err(Error::OutOfBranchRange(..)) => {
            Err(Error::OutOfBranchRange(fmt_rational(z), branch.to_string()))
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterSign {
    Plus,
    Minus,
}

/// `b = (3pq +- (p + q) sqrt(sigma)) / (p^2 + q^2 + 3pq)` with
/// `sigma = p^2 + q^2 - 6pq`.
pub fn b_from_center(p: &BigInt, q: &BigInt, sign: CenterSign) -> Result<Surd> {
    if !q.is_positive() || p <= q {
        return Err(Error::Domain(format!("need p > q >= 1, got {p}/{q}")));
    }
    let sigma = p * p + q * q - BigInt::from(6) * p * q;
    if sigma.is_negative() {
        return Err(Error::NegativeSigma(sigma.to_string()));
    }
    let den = Rational::from_integer(p * p + q * q + BigInt::from(3) * p * q);
    let s = match sign {
        CenterSign::Plus => int(1),
        CenterSign::Minus => int(-1),
    };
    let a = Rational::from_integer(BigInt::from(3) * p * q) / &den;
    let c = s * Rational::from_integer(p + q) / &den;
    Ok(surd_normalize(a, c, Rational::from_integer(sigma)))
}

/// `3 + 2 sqrt(2)`, the smallest accumulation point.
pub fn acc_minimum() -> Surd {
    surd_normalize(int(3), int(2), int(2))
}
