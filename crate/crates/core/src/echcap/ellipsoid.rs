//! ECH capacities of ellipsoids: the sorted multiset `{ia + jb : i, j >= 0}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int, sign_i128_surd, sign_int_surd, Rational, Surd};

/// `a` and `b` over the common denominator `e`: `a = (xa + ya sqrt(D))/e`.
struct Forms {
    xa: BigInt,
    ya: BigInt,
    xb: BigInt,
    yb: BigInt,
    d: BigInt,
    small: Option<[i128; 5]>,
}

impl Forms {
    fn new(a: &Surd, b: &Surd) -> Result<Forms> {
        let d = match (a.radicand().is_zero(), b.radicand().is_zero()) {
            (true, _) => b.radicand().clone(),
            (false, true) => a.radicand().clone(),
            (false, false) if a.radicand() == b.radicand() => a.radicand().clone(),
            _ => {
                return Err(Error::MixedRadicands(
                    a.radicand().to_string(),
                    b.radicand().to_string(),
                ))
            }
        };
        let (xa, ya, ea) = a.integer_form();
        let (xb, yb, eb) = b.integer_form();
        let e = ea.lcm(&eb);
        let (fa, fb) = (&e / &ea, &e / &eb);
        let (xa, ya, xb, yb) = (xa * &fa, ya * &fa, xb * &fb, yb * &fb);
        let small = (|| {
            Some([
                xa.to_i128()?,
                ya.to_i128()?,
                xb.to_i128()?,
                yb.to_i128()?,
                d.to_i128()?,
            ])
        })();
        Ok(Forms {
            xa,
            ya,
            xb,
            yb,
            d,
            small,
        })
    }

    /// Sign of `(i1 - i2) a + (j1 - j2) b`.
    fn cmp(&self, (i1, j1): (u64, u64), (i2, j2): (u64, u64)) -> Ordering {
        let di = i1 as i128 - i2 as i128;
        let dj = j1 as i128 - j2 as i128;
        if let Some([xa, ya, xb, yb, d]) = self.small {
            let x = di
                .checked_mul(xa)
                .zip(dj.checked_mul(xb))
                .and_then(|(u, v)| u.checked_add(v));
            let y = di
                .checked_mul(ya)
                .zip(dj.checked_mul(yb))
                .and_then(|(u, v)| u.checked_add(v));
            if let Some(s) = x.zip(y).and_then(|(x, y)| sign_i128_surd(x, y, d)) {
                return s;
            }
        }
        let (di, dj) = (BigInt::from(di), BigInt::from(dj));
        let x = &di * &self.xa + &dj * &self.xb;
        let y = &di * &self.ya + &dj * &self.yb;
        sign_int_surd(&x, &y, &self.d)
    }
}

/// Number of `(i, j)` with `ia + jb <= t`, or the points themselves.
fn points_below(a: &Surd, b: &Surd, t: &Surd, collect: bool) -> Result<(u64, Vec<(u64, u64)>)> {
    let mut count = 0u64;
    let mut pts = Vec::new();
    let mut j = 0u64;
    loop {
        let rest = t.try_sub(&b.scale(&int(j as i64)))?;
        if rest.is_negative() {
            break;
        }
        let imax = rest
            .try_div(a)?
            .floor()
            .to_u64()
            .ok_or_else(|| Error::Domain("enumeration bound overflow".into()))?;
        count += imax + 1;
        if collect {
            pts.extend((0..=imax).map(|i| (i, j)));
        }
        j += 1;
    }
    Ok((count, pts))
}

/// Index pairs `(i, j)` of the first `K + 1` terms of `N(a, b)`, in order.
pub(crate) fn sorted_points(a: &Surd, b: &Surd, k_max: usize) -> Result<Vec<(u64, u64)>> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain(format!(
            "ellipsoid parameters {a}, {b} must be positive"
        )));
    }
    let forms = Forms::new(a, b)?;
    let mut t = a.try_add(b)?;
    while points_below(a, b, &t, false)?.0 < k_max as u64 + 1 {
        t = t.scale(&int(2));
    }
    let (_, mut pts) = points_below(a, b, &t, true)?;
    pts.sort_by(|&p, &q| forms.cmp(p, q));
    pts.truncate(k_max + 1);
    Ok(pts)
}

/// The first `K + 1` terms of `N(a, b)`, exact and nondecreasing.
pub fn ellipsoid_caps(a: &Surd, b: &Surd, k_max: usize) -> Result<Vec<Surd>> {
    sorted_points(a, b, k_max)?
        .into_iter()
        .map(|(i, j)| a.scale(&int(i as i64)).try_add(&b.scale(&int(j as i64))))
        .collect()
}

/// `sum_{j=0}^{n-1} floor((a j + b) / m)` for `a, b >= 0`, `m > 0`.
fn floor_sum(n: &BigInt, m: &BigInt, a: &BigInt, b: &BigInt) -> BigInt {
    let (mut n, mut m, mut a, mut b) = (n.clone(), m.clone(), a.clone(), b.clone());
    let mut total = BigInt::zero();
    loop {
        if a >= m {
            total += &n * (&n - 1) / 2 * (&a / &m);
            a %= &m;
        }
        if b >= m {
            total += &n * (&b / &m);
            b %= &m;
        }
        let y_max = &a * &n + &b;
        if y_max < m {
            return total;
        }
        n = &y_max / &m;
        b = &y_max % &m;
        std::mem::swap(&mut m, &mut a);
    }
}

/// `#{(i, j) >= 0 : iQ + jP <= N}`.
fn lattice_count_below(p: &BigInt, q: &BigInt, n: &BigInt) -> BigInt {
    let j_max = n / p;
    let r = n - &j_max * p;
    let terms = &j_max + 1;
    floor_sum(&terms, q, p, &r) + terms
}

/// A single term `N(1, z)_k` for rational `z > 0`, by bisection on the
/// lattice count.
pub fn ellipsoid_cap_direct(z: &Rational, k: u64) -> Result<Rational> {
    if !z.is_positive() {
        return Err(Error::Domain(format!(
            "ellipsoid parameter {z} must be positive"
        )));
    }
    let (p, q) = (z.numer(), z.denom());
    let target = BigInt::from(k) + 1;
    let mut hi = q.clone();
    while lattice_count_below(p, q, &hi) < target {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    if lattice_count_below(p, q, &lo) >= target {
        return Ok(Rational::zero());
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if lattice_count_below(p, q, &mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Rational::new(hi, q.clone()))
}
