//! Fractional-linear symmetries relating the three families.

use std::cmp::Ordering;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, surd_cmp, Rational, Surd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `w -> (6w - 35)/(w - 6)` on `z > 6`
    Psi,
    /// `w -> (35w - 204)/(6w - 35)` on `z > 35/6`
    Phi,
    /// `z -> (6z - 1)/z` on `z > 1`
    Sh,
}

impl FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Symmetry> {
        match s {
            "Psi" | "psi" => Ok(Symmetry::Psi),
            "Phi" | "phi" => Ok(Symmetry::Phi),
            "Sh" | "sh" => Ok(Symmetry::Sh),
            _ => Err(Error::Parse(format!("unknown symmetry {s:?}"))),
        }
    }
}

impl Symmetry {
    /// `(a, b, c, d)` with image `(a z + b)/(c z + d)`, and the domain bound.
    fn data(self) -> ([i64; 4], Rational) {
        match self {
            Symmetry::Psi => ([6, -35, 1, -6], int(6)),
            Symmetry::Phi => ([35, -204, 6, -35], rat(35, 6)),
            Symmetry::Sh => ([6, -1, 1, 0], int(1)),
        }
    }
}

pub fn symmetry_apply(map: Symmetry, z: &Surd) -> Result<Surd> {
    let ([a, b, c, d], lower) = map.data();
    if surd_cmp(z, &Surd::from_rational(lower.clone()))? != Ordering::Greater {
        return Err(Error::Domain(format!(
            "{map:?} is defined for z > {lower}, got {z}"
        )));
    }
    let num = z.scale(&int(a)).add_rational(&int(b));
    let den = z.scale(&int(c)).add_rational(&int(d));
    num.try_div(&den)
}
