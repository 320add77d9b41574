//! Restricted lattice paths for the trapezoid of `X_b` and the toric ECH
//! capacities they produce.
//!
//! A path is fixed by a vertex `(x, y)`: it runs `(0, y) -> (x, y) -> (x + y, 0)`,
//! encloses `L(x, y) = (x + 1)(y + 1) + y(y + 1)/2` lattice points and has
//! action `x(1 - b) + y`. The capacity `c_k` is the least action over paths
//! with `k + 1 <= L <= 2k + 1`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathVertex {
    pub x: u64,
    pub y: u64,
}

impl PathVertex {
    pub fn lattice_count(&self) -> u64 {
        (self.x + 1) * (self.y + 1) + self.y * (self.y + 1) / 2
    }

    /// `x(1 - b) + y`.
    pub fn action(&self, b: &Rational) -> Rational {
        (Rational::one() - b) * Rational::from_integer(BigInt::from(self.x))
            + Rational::from_integer(BigInt::from(self.y))
    }
}

/// All path vertices grouped by lattice count `1..=max_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTable {
    by_count: Vec<Vec<PathVertex>>,
}

impl PathTable {
    pub fn max_count(&self) -> usize {
        self.by_count.len().saturating_sub(1)
    }

    /// Vertices with lattice count `l`, ordered by `y`.
    pub fn get(&self, l: usize) -> &[PathVertex] {
        self.by_count.get(l).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.by_count.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn path_table(max_count: usize) -> PathTable {
    let max = max_count as u64;
    let mut y_max = 0u64;
    while (PathVertex { x: 0, y: y_max + 1 }).lattice_count() <= max {
        y_max += 1;
    }
    let rows: Vec<Vec<PathVertex>> = (0..=y_max)
        .into_par_iter()
        .map(|y| {
            let mut row = Vec::new();
            let mut x = 0;
            loop {
                let v = PathVertex { x, y };
                if v.lattice_count() > max {
                    break;
                }
                row.push(v);
                x += 1;
            }
            row
        })
        .collect();
    let mut by_count = vec![Vec::new(); max_count + 1];
    for v in rows.into_iter().flatten() {
        by_count[v.lattice_count() as usize].push(v);
    }
    PathTable { by_count }
}

/// The capacities `c_0..=c_K` of `lambda X_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityTable {
    pub b: Rational,
    pub scale: Rational,
    pub caps: Vec<Rational>,
}

impl CapacityTable {
    /// Largest index held.
    pub fn k_max(&self) -> usize {
        self.caps.len().saturating_sub(1)
    }

    /// `c_k(X_b)`, i.e. with the scale divided out.
    pub fn unscaled(&self, k: usize) -> Rational {
        &self.caps[k] / &self.scale
    }
}

fn check_b(b: &Rational, scale: &Rational) -> Result<()> {
    if b.is_negative() || *b >= Rational::one() {
        return Err(Error::Domain(format!("b = {b} is outside [0, 1)")));
    }
    if !scale.is_positive() {
        return Err(Error::Domain(format!("scale {scale} is not positive")));
    }
    Ok(())
}

/// Least action numerator `x(q - p) + yq` for each lattice count, where
/// `b = p/q`. Index 0 is unused.
fn count_minima_i128(table: &PathTable, p: i128, q: i128, upto: usize) -> Option<Vec<i128>> {
    let mut out = vec![0i128; upto + 1];
    for (l, slot) in out.iter_mut().enumerate().skip(1) {
        let mut best: Option<i128> = None;
        for v in table.get(l) {
            let a = (v.x as i128)
                .checked_mul(q - p)?
                .checked_add((v.y as i128).checked_mul(q)?)?;
            best = Some(best.map_or(a, |b: i128| b.min(a)));
        }
        *slot = best?;
    }
    Some(out)
}

fn count_minima_big(table: &PathTable, p: &BigInt, q: &BigInt, upto: usize) -> Vec<BigInt> {
    let qp = q - p;
    (0..=upto)
        .map(|l| {
            table
                .get(l)
                .iter()
                .map(|v| BigInt::from(v.x) * &qp + BigInt::from(v.y) * q)
                .min()
                .unwrap_or_else(BigInt::zero)
        })
        .collect()
}

/// Minimum of `vals[k + 1..=2k + 1]` for `k = 0..=k_max`.
fn window_minima<T: Ord + Clone>(vals: &[T], k_max: usize) -> Vec<T> {
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 1;
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        while next <= 2 * k + 1 {
            while dq.back().is_some_and(|&i| vals[i] >= vals[next]) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&i| i < k + 1) {
            dq.pop_front();
        }
        out.push(vals[*dq.front().expect("window is nonempty")].clone());
    }
    out
}

/// Capacities `c_0..=c_K` of `lambda X_b` from a prebuilt path table.
pub fn toric_caps_with_table(
    table: &PathTable,
    b: &Rational,
    scale: &Rational,
    k_max: usize,
) -> Result<CapacityTable> {
    check_b(b, scale)?;
    let need = 2 * k_max + 1;
    if table.max_count() < need {
        return Err(Error::InsufficientPathTable {
            have: table.max_count(),
            need,
        });
    }
    let (p, q) = (b.numer(), b.denom());
    let factor = scale / Rational::from_integer(q.clone());
    let fast = p
        .to_i128()
        .zip(q.to_i128())
        .and_then(|(p, q)| count_minima_i128(table, p, q, need));
    let caps = match fast {
        Some(m) => window_minima(&m, k_max)
            .into_iter()
            .map(|a| Rational::from_integer(BigInt::from(a)) * &factor)
            .collect(),
        None => window_minima(&count_minima_big(table, p, q, need), k_max)
            .into_iter()
            .map(|a| Rational::from_integer(a) * &factor)
            .collect(),
    };
    Ok(CapacityTable {
        b: b.clone(),
        scale: scale.clone(),
        caps,
    })
}

/// Capacities `c_0..=c_K` of `lambda X_b`.
pub fn toric_caps(b: &Rational, scale: &Rational, k_max: usize) -> Result<CapacityTable> {
    check_b(b, scale)?;
    toric_caps_with_table(&path_table(2 * k_max + 1), b, scale, k_max)
}

/// A single capacity `c_k(X_b)` without a path table: for each `y` the
/// least admissible `x` is optimal.
pub fn toric_cap_direct(b: &Rational, k: u64) -> Result<Rational> {
    check_b(b, &Rational::one())?;
    let (p, q) = (b.numer(), b.denom());
    let qp = q - p;
    let (lo, hi) = (BigInt::from(k) + 1, BigInt::from(k) * 2 + 1);
    let mut best: Option<BigInt> = None;
    let mut y = BigInt::zero();
    loop {
        let tri: BigInt = &y * (&y + 1) / 2;
        let w: BigInt = &y + 1;
        if &w + &tri > hi {
            break;
        }
        let need: BigInt = &lo - &tri;
        let x = if need <= w {
            BigInt::zero()
        } else {
            num_integer::Integer::div_ceil(&need, &w) - 1
        };
        if (&x + 1) * &w + &tri <= hi {
            let a = &x * &qp + &y * q;
            if best.as_ref().is_none_or(|c| a < *c) {
                best = Some(a);
            }
        }
        y += 1;
    }
    Ok(Rational::new(best.expect("y = 0 is admissible"), q.clone()))
}

/// One table per `b`, sharing a path table.
pub fn toric_caps_many(
    bs: &[Rational],
    scale: &Rational,
    k_max: usize,
) -> Result<Vec<CapacityTable>> {
    let table = path_table(2 * k_max + 1);
    bs.par_iter()
        .map(|b| toric_caps_with_table(&table, b, scale, k_max))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    /// Brute force over every vertex with count in the window, with
    /// `b = p/q`.
    fn brute_cap(p: i64, q: i64, k: u64, upper: u64) -> Rational {
        let mut best = i64::MAX;
        for y in 0..=upper {
            for x in 0..=upper {
                let l = (x + 1) * (y + 1) + y * (y + 1) / 2;
                if l > k && l <= upper {
                    best = best.min(x as i64 * (q - p) + y as i64 * q);
                }
            }
        }
        rat(best, q)
    }

    #[test]
    fn small_path_tables() {
        let t = path_table(3);
        assert_eq!(t.get(1), &[PathVertex { x: 0, y: 0 }]);
        assert_eq!(t.get(2), &[PathVertex { x: 1, y: 0 }]);
        assert_eq!(
            t.get(3),
            &[PathVertex { x: 2, y: 0 }, PathVertex { x: 0, y: 1 }]
        );
    }

    #[test]
    fn every_count_is_reached() {
        let t = path_table(500);
        assert!((1..=500).all(|l| t.get(l).contains(&PathVertex {
            x: l as u64 - 1,
            y: 0
        })));
        assert!((1..=500).all(|l| t.get(l).iter().all(|v| v.lattice_count() == l as u64)));
    }

    #[test]
    fn known_capacities() {
        let c = toric_caps(&rat(1, 5), &int(5), 19).unwrap();
        assert_eq!(c.caps[5], int(10));
        assert_eq!(c.caps[19], int(24));
        assert_eq!(
            toric_caps(&rat(1, 5), &int(1), 0).unwrap().caps,
            vec![int(0)]
        );
    }

    #[test]
    fn insufficient_table() {
        let t = path_table(10);
        let e = toric_caps_with_table(&t, &rat(1, 5), &int(1), 5).unwrap_err();
        assert_eq!(e, Error::InsufficientPathTable { have: 10, need: 11 });
    }

    #[test]
    fn matches_brute_force() {
        for (p, q) in [(0, 1), (1, 5), (3, 10), (5, 11), (2, 3)] {
            let c = toric_caps(&rat(p, q), &int(1), 60).unwrap();
            for k in 0..=60u64 {
                assert_eq!(
                    c.caps[k as usize],
                    brute_cap(p, q, k, 2 * k + 1),
                    "b = {p}/{q}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn wider_window_changes_nothing() {
        let table = path_table(4 * 2000 + 1);
        for b in [int(0), rat(1, 5), rat(3, 10), rat(5, 11)] {
            let c = toric_caps_with_table(&table, &b, &int(1), 2000).unwrap();
            let (p, q) = (b.numer().to_i128().unwrap(), b.denom().to_i128().unwrap());
            let m = count_minima_i128(&table, p, q, 4 * 2000 + 1).unwrap();
            for k in 0..=2000 {
                let wide = m[k + 1..=4 * k + 1].iter().min().unwrap();
                assert_eq!(
                    c.caps[k],
                    Rational::new(BigInt::from(*wide), BigInt::from(q)),
                    "b = {b}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn big_path_agrees_with_fast_path() {
        let table = path_table(201);
        let b = rat(7, 19);
        let fast = count_minima_i128(&table, 7, 19, 201).unwrap();
        let big = count_minima_big(&table, &BigInt::from(7), &BigInt::from(19), 201);
        assert!(fast.iter().zip(&big).all(|(a, b)| BigInt::from(*a) == *b));
        assert_eq!(toric_caps(&b, &int(1), 100).unwrap().caps.len(), 101);
    }

    #[test]
    fn direct_matches_table() {
        for b in [int(0), rat(1, 5), rat(5, 11), rat(2, 3)] {
            let c = toric_caps(&b, &int(1), 300).unwrap();
            assert!(
                (0..=300).all(|k| toric_cap_direct(&b, k as u64).unwrap() == c.caps[k]),
                "b = {b}"
            );
        }
    }

    proptest! {
        #[test]
        fn monotone_and_scaling(p in 0i64..40, extra in 1i64..40, s_num in 1i64..30, s_den in 1i64..30) {
            let b = rat(p, p + extra);
            let scale = rat(s_num, s_den);
            let unit = toric_caps(&b, &int(1), 150).unwrap();
            let scaled = toric_caps(&b, &scale, 150).unwrap();
            prop_assert_eq!(&unit.caps[0], &int(0));
            prop_assert!(unit.caps.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(unit.caps.iter().zip(&scaled.caps).all(|(u, s)| u * &scale == *s));
        }

        #[test]
        fn nonincreasing_in_b(p1 in 0i64..30, p2 in 0i64..30, q in 31i64..60) {
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            let a = toric_caps(&rat(lo, q), &int(1), 120).unwrap();
            let c = toric_caps(&rat(hi, q), &int(1), 120).unwrap();
            prop_assert!(a.caps.iter().zip(&c.caps).all(|(x, y)| x >= y));
        }
    }
}
