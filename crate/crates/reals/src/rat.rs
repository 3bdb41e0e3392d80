//! Exact rationals, their text forms and their numeric codes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use seqcode::{pair, unpair, Nat};
use std::str::FromStr;

use crate::RealError;

/// Exact rational number. The underlying ratio type keeps the value
/// normalized: positive denominator, numerator and denominator coprime.
pub type Rat = BigRational;

/// Builds a rational from small integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Embeds an integer.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// 2^k, with k allowed to be negative.
pub fn pow2(k: i64) -> Rat {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// Canonical text form: plain numerator for integers, "num/den" otherwise.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses "num", "num/den" or a decimal like "0.6". The denominator must be
/// positive; the sign belongs to the numerator.
pub fn parse_rat(text: &str) -> Result<Rat, RealError> {
    let bad = || RealError::BadNumberText { text: text.to_string() };
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d <= BigInt::zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let (sign, digits) = match whole.trim().strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, whole.trim()),
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if !digits.is_empty() && !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let joined = format!("{}{}", if digits.is_empty() { "0" } else { digits }, frac);
        let n = BigInt::from_str(&joined).map_err(|_| bad())? * BigInt::from(sign);
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n = BigInt::from_str(t).map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Folds an integer onto the naturals: 0, -1, 1, -2, 2, ... get 0, 1, 2, 3, 4, ...
pub fn zig(n: &BigInt) -> Nat {
    if n.is_negative() {
        (((-n) << 1u32) - BigInt::one()).to_biguint().expect("negative branch yields a positive value")
    } else {
        (n << 1u32).to_biguint().expect("nonnegative shift stays nonnegative")
    }
}

/// Inverse of [`zig`].
pub fn unzig(c: &Nat) -> BigInt {
    if (c & BigUint::one()) == BigUint::one() {
        -BigInt::from((c + BigUint::one()) >> 1)
    } else {
        BigInt::from(c >> 1)
    }
}

/// Code of a rational: the pair of its folded numerator and its denominator
/// less one. Every natural number decodes to some rational.
pub fn rat_code(q: &Rat) -> Nat {
    let den = q.denom().to_biguint().expect("denominator is positive") - BigUint::one();
    pair(&zig(q.numer()), &den)
}

/// Inverse of [`rat_code`] up to normalization; total on the naturals.
pub fn rat_decode(c: &Nat) -> Rat {
    let (a, b) = unpair(c);
    BigRational::new(unzig(&a), BigInt::from(b + BigUint::one()))
}

/// Largest integer not above q.
pub fn floor_int(q: &Rat) -> BigInt {
    q.floor().to_integer()
}

/// Smallest integer not below q.
pub fn ceil_int(q: &Rat) -> BigInt {
    q.ceil().to_integer()
}

/// Least k such that 2^margin * 2^-k <= w, i.e. the scale at which dyadic
/// radii fit inside a window of width w with the requested headroom.
/// Panics if w is not positive.
pub fn shrink_exponent(w: &Rat, margin: u32) -> usize {
    assert!(w.is_positive(), "shrink_exponent needs a positive width");
    let target = pow2(i64::from(margin)) / w;
    if target <= Rat::one() {
        return 0;
    }
    let below = ceil_int(&target) - BigInt::one();
    below.bits().to_usize().expect("scale fits in usize")
}
