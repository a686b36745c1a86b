//! Scalar kinds shared by the recurrence and separation code.
//!
//! Everything that can run exactly is written against [`Scalar`], which is
//! implemented for `f64` and for arbitrary-precision rationals. The root
//! finder is always floating point; rationals only ever see roots that were
//! confirmed exactly.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::heun::QesRoot;

pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    const EXACT: bool;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer") / Self::from_i64(den).expect("integer")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self;

    /// Value of a located root in this scalar kind, if representable.
    fn from_root(root: &QesRoot) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64_lossy()
    }

    fn from_root(root: &QesRoot) -> Option<Self> {
        Some(root.q)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_root(root: &QesRoot) -> Option<Self> {
        root.exact.clone()
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    let cap = BigInt::from(max_den);
    for _ in 0..64 {
        let a = rest.floor();
        let ai = match BigInt::from_f64(a) {
            Some(v) => v,
            None => break,
        };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > cap {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// Smallest-denominator rational within `rel_tol` of `x` (relative to `1 + |x|`).
pub fn rationalize(x: f64, max_den: u64, rel_tol: f64) -> Option<Rational> {
    convergents(x, max_den)
        .into_iter()
        .find(|c| (c.to_f64_lossy() - x).abs() <= rel_tol * (1.0 + x.abs()))
}

/// Parses `"5"`, `"-3/8"`, `"0.125"` or `"1.5e-3"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// `num/den` string with the sign on the numerator.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
