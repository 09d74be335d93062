//! Exact rational values. All arithmetic in this domain is over
//! arbitrary-precision rationals; no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders reduced form: integers plainly, otherwise `numer/denom`.
pub fn render_rat(v: &Rat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `-3`, `24`, or `n/d`. Whitespace is not tolerated.
pub fn parse_rat(text: &str) -> Option<Rat> {
    if let Some((n, d)) = text.split_once('/') {
        let numer: BigInt = n.parse().ok()?;
        let denom: BigInt = d.parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        Some(BigRational::new(numer, denom))
    } else {
        let numer: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(numer))
    }
}

pub fn rat_abs(v: &Rat) -> Rat {
    v.abs()
}
