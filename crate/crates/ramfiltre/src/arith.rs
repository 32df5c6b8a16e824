//! Exact big-integer helpers: powers, checked division, sign checks.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// `base^e` for `e >= 0`; a negative exponent is an integrality failure.
pub(crate) fn pow(base: &BigInt, e: i64, what: &str) -> Result<BigInt> {
    if e < 0 {
        return Err(Error::Integrality(format!("{what}: negative exponent {e}")));
    }
    Ok(num_traits::pow(base.clone(), e as usize))
}

/// `base^e` as a rational, allowing negative exponents.
pub(crate) fn rpow(base: &BigInt, e: i64) -> BigRational {
    let mag = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::from(1), mag)
    }
}

/// `num / den`, failing unless the remainder is zero.
pub(crate) fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    if den.is_zero() {
        return Err(Error::Integrality(format!("{what}: division by zero")));
    }
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::Integrality(format!("{what}: {num} not divisible by {den}")));
    }
    Ok(q)
}

/// Converts a signed result into a jump, rejecting negative values.
pub(crate) fn to_jump(v: BigInt, what: &str) -> Result<BigUint> {
    if v.is_negative() {
        return Err(Error::Integrality(format!("{what}: negative value {v}")));
    }
    Ok(v.to_biguint().unwrap_or_default())
}

/// Converts an exact rational into a jump, rejecting fractions and negatives.
pub(crate) fn rational_to_jump(v: BigRational, what: &str) -> Result<BigUint> {
    if !v.is_integer() {
        return Err(Error::Integrality(format!("{what}: non-integral value {v}")));
    }
    to_jump(v.to_integer(), what)
}

/// Signed view of an unsigned value.
pub(crate) fn signed(v: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v.clone())
}
