//! The exact coefficient rings underlying all series arithmetic: rationals
//! for numeric parameters, and polynomials in theta for symbolic work.

use num::rational::BigRational;
use num::{One, Zero};

use crate::poly::Poly;

/// Ring operations required of a series coefficient. Implemented by
/// [`BigRational`] (numeric runs) and [`Poly`] (symbolic-theta runs); both
/// are exact, so series identities can be tested with plain equality.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, when this element is a unit of the ring.
    fn inverse(&self) -> Option<Self>;
    /// Embed an exact rational constant.
    fn of_rat(r: &BigRational) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn of_rat(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.degree() == Some(0) && One::is_one(&self.constant_term())
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn inverse(&self) -> Option<Self> {
        // Units of the polynomial ring are the nonzero constants.
        match self.degree() {
            Some(0) => Some(Poly::constant(self.constant_term().recip())),
            _ => None,
        }
    }
    fn of_rat(r: &BigRational) -> Self {
        Poly::constant(r.clone())
    }
}
