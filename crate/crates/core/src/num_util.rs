//! Small exact-arithmetic helpers shared across modules.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// The triangular exponent `k(k-1)/2` appearing in the deformed exponential.
pub fn choose2(k: usize) -> u64 {
    let k = k as u64;
    k * k.saturating_sub(1) / 2
}

/// Shorthand for the exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the exact integer rational `n`.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` with the convention `base^0 = 1` (also for `base = 0`).
pub fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// `base^exp` for a signed exponent; panics on `0^negative`.
pub fn rat_pow_signed(base: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        rat_pow(base, exp as u64)
    } else {
        assert!(!base.is_zero(), "zero base with negative exponent");
        rat_pow(&base.recip(), (-exp) as u64)
    }
}

/// Convert an exact rational to the nearest `f64`, robust to operands far
/// beyond the `f64` range (both numerator and denominator are rescaled by a
/// common power of two before the division).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits();
    let db = den.bits();
    // Keep ~80 significant bits on each side so the final division rounds once.
    let sh_n = nb.saturating_sub(80);
    let sh_d = db.saturating_sub(80);
    let n = (num >> sh_n).to_f64().unwrap_or(f64::NAN);
    let d = (den >> sh_d).to_f64().unwrap_or(f64::NAN);
    let scale = sh_n as i64 - sh_d as i64;
    if scale.abs() > 2_000 {
        // Far outside f64 range either way.
        return if scale > 0 {
            if r.is_positive() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            0.0
        };
    }
    (n / d) * 2f64.powi(scale as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn pow_conventions() {
        assert_eq!(rat_pow(&rat_int(0), 0), BigRational::one());
        assert_eq!(rat_pow(&rat(1, 2), 3), rat(1, 8));
        assert_eq!(rat_pow_signed(&rat(-1, 2), -2), rat_int(4));
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = rat_pow(&rat_int(10), 400);
        let r = &big / (&big * rat_int(8));
        assert!((rat_to_f64(&r) - 0.125).abs() < 1e-15);
        assert!(rat_to_f64(&big).is_infinite());
        assert_eq!(rat_to_f64(&big.recip()), 0.0);
    }
}
