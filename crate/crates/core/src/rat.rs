//! Shared big-rational helpers: robust float conversion and small
//! constructors used across the crate.

#[cfg(test)]
use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

/// Build a rational from an integer pair. Panics if `den == 0`.
#[cfg(test)]
pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Convert an exact rational to the nearest `f64`.
///
/// `numer as f64 / denom as f64` overflows to `inf/inf = NaN` once either
/// side leaves the float range, which happens routinely for bisection
/// endpoints with denominators like 2^400. Scale to an ~80-bit integer
/// quotient first and reapply the exponent, saturating honestly to ±inf or 0
/// when the true value is outside the f64 range.
pub(crate) fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().abs();
    let den = r.denom().abs();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // q = floor(num · 2^shift / den) carries ~80 significant bits.
    let shift = 80 - (nb - db);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mut v = q.to_f64().unwrap_or(f64::INFINITY);
    // Reapply 2^(-shift) in two steps so the intermediate cannot overflow
    // when the final result is representable.
    let (h1, h2) = (-shift / 2, -shift - (-shift / 2));
    v *= 2f64.powi(h1.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    v *= 2f64.powi(h2.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// `base^exp` for a rational base and signed integer exponent.
pub(crate) fn pow_i(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mag = exp.unsigned_abs() as u32;
    let p = BigRational::new(base.numer().pow(mag), base.denom().pow(mag));
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}
