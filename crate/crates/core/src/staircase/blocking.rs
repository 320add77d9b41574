//! Blocked intervals of a center-blocking class.
//!
//! On each side of the center the obstruction has a closed form, so the
//! condition `mu(acc(b)) = V_b(acc(b)) = (1 + z)/(3 - b)` gives `b` as a
//! Mobius function of `z`. Substituting into the accumulation relation
//! `(1 + z)^2 (1 - b^2) = z (3 - b)^2` leaves a quartic in `z`, whose roots
//! are isolated and, where possible, identified exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::classes::{center_blocking_test, QuasiPerfectClass};
use crate::error::{Error, Result};
use crate::exactnum::{int, surd_cmp, surd_normalize, Rational, Surd};
use crate::poly::{real_roots, Poly, RealRoot};
use crate::staircase::acc::{Branch, RealValue};
use crate::staircase::family::Family;

/// `J = (b_low, b_high)` and its image `I = (z_low, z_high)` under `acc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingInterval {
    pub b_low: RealValue,
    pub b_high: RealValue,
    pub z_low: RealValue,
    pub z_high: RealValue,
    pub exact: bool,
}

const ROOT_BITS: u32 = 256;

/// `b = N(z) / D(z)` with both linear.
struct Mobius {
    n: Poly,
    d: Poly,
}

impl Mobius {
    fn at(&self, z: &Surd) -> Result<Surd> {
        self.n.eval_surd(z).try_div(&self.d.eval_surd(z))
    }

    fn at_rational(&self, z: &Rational) -> Option<Rational> {
        let den = self.d.eval(z);
        (!den.is_zero()).then(|| self.n.eval(z) / den)
    }

    /// `(1 + z)^2 (D^2 - N^2) - z (3D - N)^2`.
    fn endpoint_polynomial(&self) -> Poly {
        let one_plus = Poly::from_ints(&[1, 1]);
        let z = Poly::from_ints(&[0, 1]);
        let t = self.d.mul(&Poly::from_ints(&[3])).sub(&self.n);
        one_plus
            .mul(&one_plus)
            .mul(&self.d.mul(&self.d).sub(&self.n.mul(&self.n)))
            .sub(&z.mul(&t).mul(&t))
    }
}

fn lin(c0: &BigInt, c1: &BigInt) -> Poly {
    Poly::new(vec![
        Rational::from_integer(c0.clone()),
        Rational::from_integer(c1.clone()),
    ])
}

fn b_in_branch(b: &Rational, branch: Branch) -> bool {
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    match branch {
        Branch::L => *b >= Rational::zero() && *b < third,
        Branch::U => *b > third && *b < Rational::one(),
    }
}

fn endpoint(root: &RealRoot, map: &Mobius) -> Result<(RealValue, RealValue)> {
    if let Some(z) = &root.exact {
        let b = map.at(z)?;
        return Ok((RealValue::Exact(z.clone()), RealValue::Exact(b)));
    }
    let mid = root.midpoint();
    let err = (&root.hi - &root.lo) / int(2);
    let b_mid = map
        .at_rational(&mid)
        .ok_or_else(|| Error::Domain("pole at blocking endpoint".into()))?;
    let mut b_err = Rational::zero();
    for x in [&root.lo, &root.hi] {
        if let Some(bx) = map.at_rational(x) {
            let e = num_traits::Signed::abs(&(bx - &b_mid));
            if e > b_err {
                b_err = e;
            }
        }
    }
    Ok((
        RealValue::Approx {
            value: mid,
            error: err,
        },
        RealValue::Approx {
            value: b_mid,
            error: b_err,
        },
    ))
}

/// Picks the root nearest `a` on the requested side whose `b` lies on the
/// branch of the class.
fn pick(
    roots: &[RealRoot],
    map: &Mobius,
    a: &Rational,
    below: bool,
    branch: Branch,
) -> Option<RealRoot> {
    let mut cands: Vec<&RealRoot> = roots
        .iter()
        .filter(|r| if below { r.hi < *a } else { r.lo > *a })
        .filter(|r| r.lo > Rational::one())
        .collect();
    if below {
        cands.reverse();
    }
    cands
        .into_iter()
        .find(|r| {
            map.at_rational(&r.midpoint())
                .is_some_and(|b| b_in_branch(&b, branch))
        })
        .cloned()
}

/// Blocked intervals of a center-blocking quasi-perfect class.
pub fn blocking_interval_generic(c: &QuasiPerfectClass) -> Result<BlockingInterval> {
    match center_blocking_test(c) {
        Ok(true) => {}
        Ok(false) => return Err(Error::NotBlocking(format!("{c} is not center-blocking"))),
        Err(e) => return Err(Error::NotBlocking(format!("{c}: {e}"))),
    }
    let branch = if c.slope() < Rational::new(BigInt::one(), BigInt::from(3)) {
        Branch::L
    } else {
        Branch::U
    };
    let (d, m, p, q) = (&c.d, &c.m, &c.p, &c.q);
    let three = BigInt::from(3);
    // qz(3 - b) = (1 + z)(d - mb)
    let left = Mobius {
        n: lin(d, &(d - &three * q)),
        d: lin(m, &(m - q)),
    };
    // p(3 - b) = (1 + z)(d - mb)
    let right = Mobius {
        n: lin(&(d - &three * p), d),
        d: lin(&(m - p), m),
    };
    let a = c.center();
    let lroots = real_roots(&left.endpoint_polynomial(), ROOT_BITS);
    let rroots = real_roots(&right.endpoint_polynomial(), ROOT_BITS);
    let lo = pick(&lroots, &left, &a, true, branch)
        .ok_or_else(|| Error::NotBlocking(format!("{c}: no lower endpoint")))?;
    let hi = pick(&rroots, &right, &a, false, branch)
        .ok_or_else(|| Error::NotBlocking(format!("{c}: no upper endpoint")))?;
    let (z_low, b_at_low) = endpoint(&lo, &left)?;
    let (z_high, b_at_high) = endpoint(&hi, &right)?;
    let exact = z_low.is_exact() && z_high.is_exact();
    let (b_low, b_high) = match branch {
        Branch::U => (b_at_low, b_at_high),
        Branch::L => (b_at_high, b_at_low),
    };
    Ok(BlockingInterval {
        b_low,
        b_high,
        z_low,
        z_high,
        exact,
    })
}

/// Closed-form blocked intervals of the `U` blocking classes
/// `(n + 3, n + 2; w(2n + 6))`, with `sigma = (2n + 1)(2n + 5)`.
pub fn blocking_family_closed_form_u(n: u32) -> BlockingInterval {
    let n = n as i64;
    let sigma = int((2 * n + 1) * (2 * n + 5));
    let k = 2 * n * n + 6 * n;
    let b_low = surd_normalize(rat_of(k + 3, k + 2), rat_of(-1, k + 2), sigma.clone());
    let den = 5 * n * n + 30 * n + 44;
    let b_high = surd_normalize(
        rat_of((n + 3) * (3 * n + 7), den),
        rat_of(n + 3, den),
        sigma.clone(),
    );
    let z_low = surd_normalize(
        &sigma / int(2 * (2 * n + 1)),
        rat_of(2 * n + 3, 2 * (2 * n + 1)),
        sigma.clone(),
    );
    let z_high = surd_normalize(
        int(6) + &sigma / int(2 * (2 * n + 5)),
        rat_of(2 * n + 3, 2 * (2 * n + 5)),
        sigma,
    );
    BlockingInterval {
        b_low: RealValue::Exact(b_low),
        b_high: RealValue::Exact(b_high),
        z_low: RealValue::Exact(z_low),
        z_high: RealValue::Exact(z_high),
        exact: true,
    }
}

/// Closed form for a family; only `U` has one.
pub fn blocking_family_closed_form(f: Family, n: u32) -> Result<BlockingInterval> {
    match f {
        Family::U => Ok(blocking_family_closed_form_u(n)),
        _ => Err(Error::InvalidArgument(format!(
            "no closed-form blocking interval for family {f}"
        ))),
    }
}

fn rat_of(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Whether `b` lies strictly inside the blocked `b`-interval (exact
/// endpoints only).
pub fn blocks_b(j: &BlockingInterval, b: &Surd) -> Result<Option<bool>> {
    let (Some(lo), Some(hi)) = (j.b_low.exact(), j.b_high.exact()) else {
        return Ok(None);
    };
    Ok(Some(
        surd_cmp(b, lo)? == Ordering::Greater && surd_cmp(b, hi)? == Ordering::Less,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfweights::periodic_cf_value;
    use crate::exactnum::rat;
    use crate::staircase::family::blocking_class;

    #[test]
    fn bu0_closed_form() {
        let j = blocking_family_closed_form_u(0);
        assert_eq!(
            j.b_low,
            RealValue::Exact(surd_normalize(rat(3, 2), rat(-1, 2), int(5)))
        );
        assert_eq!(
            j.b_high,
            RealValue::Exact(surd_normalize(rat(21, 44), rat(3, 44), int(5)))
        );
        assert_eq!(
            j.z_low,
            RealValue::Exact(periodic_cf_value(&[], &[5, 1]).unwrap())
        );
        assert_eq!(
            j.z_high,
            RealValue::Exact(periodic_cf_value(&[7], &[5, 1]).unwrap())
        );
    }

    #[test]
    fn bu1_lower_b() {
        let j = blocking_family_closed_form_u(1);
        assert_eq!(
            j.b_low,
            RealValue::Exact(surd_normalize(rat(11, 10), rat(-1, 10), int(21)))
        );
        assert_eq!(
            j.z_high,
            RealValue::Exact(periodic_cf_value(&[9], &[7, 3]).unwrap())
        );
    }

    #[test]
    fn generic_matches_closed_form() {
        for n in 0..=5 {
            let c = blocking_class(Family::U, n).unwrap();
            assert_eq!(
                blocking_interval_generic(&c).unwrap(),
                blocking_family_closed_form_u(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn be0_upper_endpoint() {
        let c = blocking_class(Family::E, 0).unwrap();
        let j = blocking_interval_generic(&c).unwrap();
        assert_eq!(
            j.z_high,
            RealValue::Exact(periodic_cf_value(&[5, 1, 6], &[5, 1]).unwrap())
        );
        let b0 = Surd::from_rational(rat(19, 61));
        assert_eq!(blocks_b(&j, &b0).unwrap(), Some(true));
    }

    #[test]
    fn non_blocking_rejected() {
        let c = crate::classes::make_quasi_perfect(
            BigInt::from(2),
            BigInt::zero(),
            BigInt::from(5),
            BigInt::one(),
        )
        .unwrap();
        assert!(matches!(
            blocking_interval_generic(&c),
            Err(Error::NotBlocking(_))
        ));
    }
}
