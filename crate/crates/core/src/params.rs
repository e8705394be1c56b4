//! Process parameters: innovations are i.i.d. uniform on `[-a, 1]` and the
//! coupling parameter is `theta`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::num_util::rat_int;

/// The parameter pair `(a, theta)`, kept as exact rationals. Construction
/// enforces `a > -1` so the uniform interval `[-a, 1]` is nondegenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    a: BigRational,
    theta: BigRational,
}

impl Params {
    pub fn new(a: BigRational, theta: BigRational) -> Result<Self> {
        if a <= rat_int(-1) {
            return Err(Error::InvalidLeftEndpoint(format!(
                "a = {a} but the left endpoint requires a > -1"
            )));
        }
        Ok(Params { a, theta })
    }

    /// Convenience constructor from integer fractions.
    pub fn from_ints(a_num: i64, a_den: i64, t_num: i64, t_den: i64) -> Result<Self> {
        Params::new(
            BigRational::new(a_num.into(), a_den.into()),
            BigRational::new(t_num.into(), t_den.into()),
        )
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn theta(&self) -> &BigRational {
        &self.theta
    }

    /// `1 + a`, the width of the innovation interval (always positive).
    pub fn one_plus_a(&self) -> BigRational {
        &self.a + BigRational::one()
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(a = {}, theta = {})", self.a, self.theta)
    }
}

/// Parse an exact rational from a command-line string: either `p/q` or a
/// decimal string (`0.25` becomes exactly `1/4`). Never goes through binary
/// floating point.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Domain(format!("cannot parse '{s}' as an exact rational"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(Error::Domain(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac_part}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut r = BigRational::new(n, d);
        if neg {
            r = -r;
        }
        return Ok(r);
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(n))
}
