//! Truncated formal power series over an exact coefficient ring.
//!
//! A series of order `N` stores the coefficients of `z^0..z^N`. All binary
//! operations truncate to the smaller order of the two operands, so a result
//! never claims more precision than its inputs carry.

use num::rational::BigRational;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::num_util::rat_int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Build from explicit coefficients of `z^0..z^N`; must be nonempty.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least z^0");
        Series { coeffs }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Series::constant(C::one(), order)
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    /// Truncation order `N`: coefficients of `z^0..z^N` are known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        assert!(k <= self.order(), "coefficient z^{k} beyond truncation");
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].add(&rhs.coeffs[k]))
            .collect();
        Series { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].sub(&rhs.coeffs[k]))
            .collect();
        Series { coeffs }
    }

    pub fn neg(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(C::neg).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                let t = self.coeffs[i].mul(&rhs.coeffs[j]);
                coeffs[i + j] = coeffs[i + j].add(&t);
            }
        }
        Series { coeffs }
    }

    /// Multiplicative inverse up to the truncation order, by the usual
    /// convolution recursion `t_n = -s_0^{-1} * sum_{k=1}^n s_k t_{n-k}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .inverse()
            .ok_or(Error::NonInvertibleConstantTerm)?;
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        out[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                let t = self.coeffs[k].mul(&out[m - k]);
                acc = acc.add(&t);
            }
            out[m] = acc.mul(&inv0).neg();
        }
        Ok(Series { coeffs: out })
    }

    /// Divide by `z`: shift every coefficient one slot down. The constant
    /// term must vanish exactly; anything else means a formula was applied
    /// outside its region.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        assert!(self.order() >= 1, "shift_down needs order >= 1");
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Series logarithm via `(log s)' = s'/s`, integrated termwise with zero
    /// constant term. Requires constant term exactly 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Series::zero(0));
        }
        // s' truncated to order n-1
        let deriv: Vec<C> = (1..=n)
            .map(|k| self.coeffs[k].mul(&C::of_rat(&rat_int(k as i64))))
            .collect();
        let ratio = Series { coeffs: deriv }.mul(&self.truncate(n - 1).reciprocal()?);
        let mut out = Vec::with_capacity(n + 1);
        out.push(C::zero());
        for (k, c) in ratio.coeffs.iter().enumerate() {
            let inv_k = C::of_rat(&BigRational::new(1.into(), (k as i64 + 1).into()));
            out.push(c.mul(&inv_k));
        }
        Ok(Series { coeffs: out })
    }

    /// Map the coefficients into another ring (e.g. evaluate symbolic theta).
    pub fn map<D: Coeff, F: FnMut(&C) -> D>(&self, f: F) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Truncation of the deformed exponential `E(theta, scale*z)`: the
/// coefficient of `z^k` is `theta^(k(k-1)/2) * scale^k / k!`.
pub fn deformed_exp_series<C: Coeff>(theta: &C, scale: &C, order: usize) -> Series<C> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = C::one();
    coeffs.push(term.clone());
    let mut theta_pow = C::one(); // theta^(k-1) when computing term k
    for k in 1..=order {
        // term_k = term_{k-1} * theta^(k-1) * scale / k
        let inv_k = C::of_rat(&BigRational::new(1.into(), (k as i64).into()));
        term = term.mul(&theta_pow).mul(scale).mul(&inv_k);
        coeffs.push(term.clone());
        theta_pow = theta_pow.mul(theta);
    }
    Series { coeffs }
}
