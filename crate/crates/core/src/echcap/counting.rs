//! Capacity and lattice-point counting functions, and the checks that
//! compare them for `5 H_{1/5}` against the triangle `Delta_{1/2, 1/12}`.
//!
//! Capacity counts start at `k = 0`, so `c_0 = 0` is always counted. The
//! direct count `cap(48) = 63` pins this convention against the
//! quasipolynomial below.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::echcap::paths::{toric_caps, CapacityTable};
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, rat_ceil, rat_floor, Rational};

/// `#{k >= 0 : c_k <= t}`.
pub fn cap_count(table: &CapacityTable, t: &Rational) -> Result<u64> {
    match table.caps.last() {
        Some(last) if last > t => Ok(table.caps.partition_point(|c| c <= t) as u64),
        last => Err(Error::TableTooShort {
            last: last.map_or_else(|| "none".to_string(), |c| c.to_string()),
            t: t.to_string(),
        }),
    }
}

/// Lattice points `(x, y) >= 0` with `x/u + y/v <= t`.
pub fn ehrhart_count(u: &Rational, v: &Rational, t: u64) -> Result<u64> {
    if !u.is_positive() || !v.is_positive() {
        return Err(Error::Domain(format!(
            "triangle legs {u}, {v} must be positive"
        )));
    }
    let t = Rational::from_integer(BigInt::from(t));
    let y_max = rat_floor(&(&t * v));
    let mut total = BigInt::zero();
    let mut y = BigInt::zero();
    while y <= y_max {
        let x_max = rat_floor(&((&t - Rational::from_integer(y.clone()) / v) * u));
        total += x_max + 1;
        y += 1;
    }
    total
        .to_u64()
        .ok_or_else(|| Error::Domain("lattice count overflow".into()))
}

fn cap_constant(r: u64) -> Rational {
    match r {
        0 | 10 => int(1),
        11 | 23 => rat(13, 48),
        1 | 9 => rat(11, 16),
        12 | 22 => rat(-3, 2),
        2 | 8 => rat(-2, 3),
        13 | 21 => rat(-5, 16),
        3 | 7 => rat(-17, 16),
        14 | 20 => rat(5, 6),
        4 | 6 => rat(1, 2),
        15 | 19 => rat(15, 16),
        5 => rat(49, 48),
        16 | 18 => int(0),
        _ => rat(-95, 48),
    }
}

/// Period-24 quasipolynomial for the capacity count of `5 H_{1/5}`, valid
/// for `t >= 43`.
pub fn cap_quasipolynomial(t: u64) -> Rational {
    let tr = Rational::from_integer(BigInt::from(t));
    &tr * &tr / int(48) + &tr * rat(7, 24) + cap_constant(t % 24)
}

fn ehr_constant(r: u64) -> Rational {
    match r {
        0 | 8 => int(1),
        4 => rat(4, 3),
        1 | 9 => rat(11, 16),
        5 => rat(49, 48),
        2 | 6 => rat(5, 4),
        10 => rat(7, 12),
        3 | 7 => rat(15, 16),
        _ => rat(13, 48),
    }
}

/// Period-12 quasipolynomial for the lattice count of `t Delta_{1/2, 1/12}`.
pub fn ehr_quasipolynomial(t: u64) -> Rational {
    let tr = Rational::from_integer(BigInt::from(t));
    let linear = if t.is_multiple_of(2) {
        rat(1, 3)
    } else {
        rat(7, 24)
    };
    &tr * &tr / int(48) + &tr * linear + ehr_constant(t % 12)
}

/// Lattice counts in the regions where the triangles for `z` and for `6`
/// differ, and on the shared boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceCounts {
    pub up: u64,
    pub down: u64,
    pub boundary: u64,
}

fn nonneg(n: BigInt) -> u64 {
    if n.is_negative() {
        0
    } else {
        n.to_u64().expect("slice count fits in u64")
    }
}

pub fn slice_counts(t: u64, z: &Rational) -> SliceCounts {
    let tr = Rational::from_integer(BigInt::from(t));
    let z6 = z + int(6);
    let r = |n: &BigInt| Rational::from_integer(n.clone());
    let mut up = 0;
    let mut y = rat_ceil(&(&tr / int(24)));
    let y_hi = rat_floor(&(&tr / int(12)));
    while y <= y_hi {
        let x1 = (&tr * &z6 - int(24) * z * r(&y)) / int(24);
        let x2 = (&tr - int(12) * r(&y)) / int(2);
        let start = if x1.is_negative() {
            BigInt::zero()
        } else {
            rat_ceil(&x1)
        };
        up += nonneg(rat_floor(&x2) - start + 1);
        y += 1;
    }
    let mut down = 0;
    let mut y = BigInt::zero();
    let y_hi = rat_floor(&(&tr / int(24)));
    while y <= y_hi {
        let x3 = (&tr - int(12) * r(&y)) / int(2);
        let x4 = (&tr * &z6 - int(24) * z * r(&y)) / int(24);
        down += nonneg(rat_floor(&x4) - rat_ceil(&x3) + 1);
        y += 1;
    }
    let boundary = if t % 2 == 1 { 0 } else { t.div_ceil(24) };
    SliceCounts { up, down, boundary }
}

/// `dtilde - d` by residue of `t` mod 24.
fn dtilde_excess(t: u64) -> i64 {
    match t % 24 {
        2 | 8 | 13 | 16 | 18 | 21 => 1,
        3 | 7 | 12 | 22 => 2,
        17 => 3,
        10 => -1,
        _ => 0,
    }
}

/// Outcome of [`verify_b15`]; failures are listed rather than raised.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct B15Report {
    pub t_max: u64,
    pub index_origin: String,
    pub checks: u64,
    pub cap_mismatches: Vec<String>,
    pub ehr_mismatches: Vec<String>,
    pub slice_failures: Vec<String>,
    pub identity_failures: Vec<String>,
    pub dtilde_mismatches: Vec<String>,
}

impl B15Report {
    pub fn passed(&self) -> bool {
        self.cap_mismatches.is_empty()
            && self.ehr_mismatches.is_empty()
            && self.slice_failures.is_empty()
            && self.identity_failures.is_empty()
            && self.dtilde_mismatches.is_empty()
    }
}

impl fmt::Display for B15Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t_max: {}", self.t_max)?;
        writeln!(f, "index origin: {}", self.index_origin)?;
        writeln!(f, "checks: {}", self.checks)?;
        for (name, list) in [
            ("capacity quasipolynomial", &self.cap_mismatches),
            ("Ehrhart quasipolynomial", &self.ehr_mismatches),
            ("U <= D", &self.slice_failures),
            ("decomposition identity", &self.identity_failures),
            ("dtilde table", &self.dtilde_mismatches),
        ] {
            writeln!(f, "{name}: {} failure(s)", list.len())?;
            for m in list {
                writeln!(f, "  {m}")?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// The capacity table of `5 H_{1/5}` reaching past `t_max`.
fn capacity_table_past(t_max: u64) -> Result<CapacityTable> {
    let mut k = (t_max * t_max / 48 + 7 * t_max / 24 + 16) as usize;
    loop {
        let table = toric_caps(&rat(1, 5), &int(5), k)?;
        if *table.caps.last().expect("nonempty") > Rational::from_integer(BigInt::from(t_max)) {
            return Ok(table);
        }
        k *= 2;
    }
}

const QP_START: u64 = 43;

/// Recomputes the counting identities for `5 H_{1/5}` on `t <= t_max` and
/// for each sample `z` just above 6.
pub fn verify_b15(t_max: u64, z_samples: &[Rational]) -> Result<B15Report> {
    if t_max < QP_START {
        return Err(Error::InvalidArgument(format!(
            "t_max = {t_max} is below {QP_START}"
        )));
    }
    for z in z_samples {
        if *z <= int(6) {
            return Err(Error::Domain(format!("sample z = {z} is not above 6")));
        }
    }
    let table = capacity_table_past(t_max)?;
    let (half, twelfth) = (rat(1, 2), rat(1, 12));
    let mut rep = B15Report {
        t_max,
        index_origin: format!("k >= 0 (cap(48) = {})", cap_count(&table, &int(48))?),
        ..B15Report::default()
    };
    for t in 0..=t_max {
        let tr = Rational::from_integer(BigInt::from(t));
        let ehr = ehrhart_count(&half, &twelfth, t)?;
        rep.checks += 1;
        if Rational::from_integer(BigInt::from(ehr)) != ehr_quasipolynomial(t) {
            rep.ehr_mismatches.push(format!(
                "t = {t}: count {ehr}, formula {}",
                ehr_quasipolynomial(t)
            ));
        }
        for z in z_samples {
            let s = slice_counts(t, z);
            rep.checks += 2;
            let strict = t % 24 == 10;
            if s.up > s.down || (strict && s.up + 1 > s.down) {
                rep.slice_failures
                    .push(format!("z = {z}, t = {t}: U = {}, D = {}", s.up, s.down));
            }
            let (u, v) = ((z + int(6)) / int(24), (z + int(6)) / (int(24) * z));
            let lhs = ehrhart_count(&u, &v, t)? as i64;
            let rhs = ehr as i64 + s.down as i64 - s.up as i64 - s.boundary as i64;
            if lhs != rhs {
                rep.identity_failures
                    .push(format!("z = {z}, t = {t}: {lhs} vs {rhs}"));
            }
        }
        if t < QP_START {
            continue;
        }
        let cap = cap_count(&table, &tr)?;
        rep.checks += 2;
        if Rational::from_integer(BigInt::from(cap)) != cap_quasipolynomial(t) {
            rep.cap_mismatches.push(format!(
                "t = {t}: count {cap}, formula {}",
                cap_quasipolynomial(t)
            ));
        }
        let d = if t % 2 == 1 { 0 } else { t.div_ceil(24) as i64 };
        let dtilde = ehr as i64 - cap as i64;
        if dtilde - d != dtilde_excess(t) {
            rep.dtilde_mismatches
                .push(format!("t = {t}: dtilde = {dtilde}, d = {d}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ehrhart_examples() {
        assert_eq!(ehrhart_count(&rat(1, 2), &rat(1, 12), 0).unwrap(), 1);
        assert_eq!(ehrhart_count(&rat(1, 2), &rat(1, 12), 48).unwrap(), 65);
        assert_eq!(ehrhart_count(&int(1), &int(1), 2).unwrap(), 6);
    }

    #[test]
    fn cap_count_calibration() {
        let t = toric_caps(&rat(1, 5), &int(5), 200).unwrap();
        assert!(cap_count(&t, &int(0)).unwrap() >= 1);
        let direct = t.caps.iter().filter(|c| **c <= int(10)).count() as u64;
        assert_eq!(cap_count(&t, &int(10)).unwrap(), direct);
        assert_eq!(cap_count(&t, &int(48)).unwrap(), 63);
        assert_eq!(cap_quasipolynomial(48), int(63));
    }

    #[test]
    fn short_table() {
        let t = toric_caps(&rat(1, 5), &int(5), 5).unwrap();
        assert!(matches!(
            cap_count(&t, &int(10)),
            Err(Error::TableTooShort { .. })
        ));
    }

    #[test]
    fn boundary_counts() {
        assert_eq!(slice_counts(48, &rat(601, 100)).boundary, 2);
        assert_eq!(slice_counts(47, &rat(601, 100)).boundary, 0);
    }

    #[test]
    fn verify_passes() {
        let r = verify_b15(200, &[rat(601, 100), rat(6001, 1000)]).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.index_origin.contains("63"));
    }

    proptest! {
        #[test]
        fn ehrhart_matches_brute_force(un in 1i64..10, ud in 1i64..10, vn in 1i64..10, vd in 1i64..10, t in 0u64..25) {
            let (u, v) = (rat(un, ud), rat(vn, vd));
            let t_i = t as i64;
            let mut n = 0u64;
            for x in 0..=t_i * un / ud {
                for y in 0..=t_i * vn / vd {
                    if x * ud * vn + y * vd * un <= t_i * un * vn {
                        n += 1;
                    }
                }
            }
            prop_assert_eq!(ehrhart_count(&u, &v, t).unwrap(), n);
        }

        #[test]
        fn counts_nondecreasing(t in 0u64..300) {
            let (u, v) = (rat(1, 2), rat(1, 12));
            prop_assert!(ehrhart_count(&u, &v, t).unwrap() <= ehrhart_count(&u, &v, t + 1).unwrap());
        }
    }
}
