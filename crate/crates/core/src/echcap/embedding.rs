//! Lower bounds for the embedding function from ECH capacities.

use std::cmp::Ordering;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::echcap::ellipsoid::{ellipsoid_caps, sorted_points};
use crate::echcap::paths::CapacityTable;
use crate::error::{Error, Result};
use crate::exactnum::{int, surd_cmp, Rational, Surd};
use crate::staircase::acc;

/// `max_k N(1, z)_k / c_k(X_b)` and every `k` attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityBound {
    pub value: Surd,
    pub argmax: Vec<usize>,
}

fn check_len(table: &CapacityTable, k_max: usize) -> Result<()> {
    if table.k_max() < k_max {
        return Err(Error::InvalidArgument(format!(
            "capacity table holds k <= {}, need {k_max}",
            table.k_max()
        )));
    }
    Ok(())
}

/// Unscaled capacities `c_1..c_K` as `(numerator, denominator)` when all fit.
fn small_caps(table: &CapacityTable, k_max: usize) -> Option<Vec<(i128, i128)>> {
    (0..=k_max)
        .map(|k| {
            let c = table.unscaled(k);
            Some((c.numer().to_i128()?, c.denom().to_i128()?))
        })
        .collect()
}

/// Rational `z = p/q`: `e_k / c_k = (i q + j p) cd / (q cn)`, compared by
/// cross-multiplication. `None` on overflow.
fn c_lower_small(
    z: &Rational,
    caps: &[(i128, i128)],
    k_max: usize,
) -> Result<Option<CapacityBound>> {
    let (Some(p), Some(q)) = (z.numer().to_i128(), z.denom().to_i128()) else {
        return Ok(None);
    };
    let pts = sorted_points(&Surd::one(), &Surd::from_rational(z.clone()), k_max)?;
    let (mut bn, mut bd, mut argmax) = (0i128, 1i128, Vec::new());
    for (k, &(i, j)) in pts.iter().enumerate().skip(1) {
        let (cn, cd) = caps[k];
        let Some(num) = (i as i128)
            .checked_mul(q)
            .zip((j as i128).checked_mul(p))
            .and_then(|(x, y)| x.checked_add(y))
            .and_then(|a| a.checked_mul(cd))
        else {
            return Ok(None);
        };
        let (Some(l), Some(r)) = (num.checked_mul(bd), bn.checked_mul(cn)) else {
            return Ok(None);
        };
        match l.cmp(&r) {
            Ordering::Greater => (bn, bd, argmax) = (num, cn, vec![k]),
            Ordering::Equal => argmax.push(k),
            Ordering::Less => {}
        }
    }
    let value = Rational::from_integer(bn.into()) / Rational::from_integer((bd * q).into());
    Ok(Some(CapacityBound {
        value: Surd::from_rational(value),
        argmax,
    }))
}

fn c_lower_with(
    z: &Surd,
    table: &CapacityTable,
    k_max: usize,
    caps: Option<&[(i128, i128)]>,
) -> Result<CapacityBound> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    if surd_cmp(z, &Surd::one())? == Ordering::Less {
        return Err(Error::Domain(format!("z = {z} is below 1")));
    }
    check_len(table, k_max)?;
    if let (Some(zr), Some(caps)) = (z.as_rational(), caps) {
        if let Some(b) = c_lower_small(zr, caps, k_max)? {
            return Ok(b);
        }
    }
    let e = ellipsoid_caps(&Surd::one(), z, k_max)?;
    let mut best: Option<CapacityBound> = None;
    for (k, ek) in e.iter().enumerate().skip(1) {
        let r = ek.scale(&(Rational::one() / table.unscaled(k)));
        match &mut best {
            None => {
                best = Some(CapacityBound {
                    value: r,
                    argmax: vec![k],
                })
            }
            Some(cur) => match surd_cmp(&r, &cur.value)? {
                Ordering::Greater => {
                    *cur = CapacityBound {
                        value: r,
                        argmax: vec![k],
                    }
                }
                Ordering::Equal => cur.argmax.push(k),
                Ordering::Less => {}
            },
        }
    }
    Ok(best.expect("K >= 1"))
}

/// The ECH lower bound on `c_{X_b}(z)` truncated at `K`.
pub fn c_lower(z: &Surd, table: &CapacityTable, k_max: usize) -> Result<CapacityBound> {
    let caps = (table.k_max() >= k_max)
        .then(|| small_caps(table, k_max))
        .flatten();
    c_lower_with(z, table, k_max, caps.as_deref())
}

/// [`c_lower`] at each of `zs`, evaluated in parallel.
pub fn c_lower_curve(
    zs: &[Surd],
    table: &CapacityTable,
    k_max: usize,
) -> Result<Vec<CapacityBound>> {
    let caps = (table.k_max() >= k_max)
        .then(|| small_caps(table, k_max))
        .flatten();
    zs.par_iter()
        .map(|z| c_lower_with(z, table, k_max, caps.as_deref()))
        .collect()
}

/// Smallest `k <= K` whose capacity ratio at `z = acc(b)` exceeds the
/// volume bound `(1 + z)/(3 - b)`.
pub fn min_obstructing_index(table: &CapacityTable, k_max: usize) -> Result<Option<usize>> {
    check_len(table, k_max)?;
    let b = &table.b;
    let z = acc(&Surd::from_rational(b.clone()))?
        .exact()
        .cloned()
        .ok_or_else(|| Error::Domain(format!("acc({b}) is not quadratic")))?;
    let e = ellipsoid_caps(&Surd::one(), &z, k_max)?;
    let three_minus_b = int(3) - b;
    let one_plus_z = z.add_rational(&Rational::one());
    for (k, ek) in e.iter().enumerate().skip(1) {
        let lhs = ek.scale(&three_minus_b);
        let rhs = one_plus_z.scale(&table.unscaled(k));
        if surd_cmp(&lhs, &rhs)? == Ordering::Greater {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
