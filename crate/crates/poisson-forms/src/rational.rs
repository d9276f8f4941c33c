//! Exact rational scalars and their `"p/q"` string form used in all JSON
//! output.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

/// The scalar type of the exact half of the crate.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qzero() -> Q {
    Q::zero()
}

pub fn qone() -> Q {
    Q::one()
}

/// Serializes a rational as `"p"` or `"p/q"` (denominator omitted when 1).
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn q_from_string(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
        Some((num, den)) => {
            let num = num.trim().parse::<BigInt>().ok()?;
            let den = den.trim().parse::<BigInt>().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Q::new(num, den))
            }
        }
    }
}

/// Lossy conversion to `f64`, used only when exact data feeds the numeric
/// module or diagnostics.
pub fn q_to_f64(x: &Q) -> f64 {
    let num = x.numer();
    let den = x.denom();
    // Good enough for the small rationals appearing in this crate.
    let nf: f64 = num.to_string().parse().unwrap_or(f64::NAN);
    let df: f64 = den.to_string().parse().unwrap_or(f64::NAN);
    nf / df
}

/// Sign of a rational as -1, 0, 1.
pub fn q_sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let x = q_from_string(s).unwrap();
            assert_eq!(q_to_string(&x), s);
        }
        assert_eq!(q_from_string("4/2").map(|x| q_to_string(&x)), Some("2".into()));
        assert!(q_from_string("1/0").is_none());
        assert!(q_from_string("abc").is_none());
    }
}
