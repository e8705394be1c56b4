//! Dense univariate polynomials with exact rational coefficients.
//!
//! Used both for polynomials in the coupling parameter theta (the symbolic
//! coefficient ring of series) and for the integration-variable pieces of the
//! dynamic-programming oracle.

use num::rational::BigRational;
use num::{One, Zero};

use crate::num_util::rat_pow;

/// A polynomial stored as a dense coefficient list, lowest degree first.
/// The zero polynomial is the empty list; otherwise the leading coefficient
/// is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * x^deg`.
    pub fn monomial(c: BigRational, deg: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    /// Build from a coefficient list, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Number of nonzero coefficients.
    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, exp: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation at an exact rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute `x -> s*x`: coefficient of `x^k` is scaled by `s^k`.
    pub fn compose_scale(&self, s: &BigRational) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * rat_pow(s, k as u64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(BigRational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c / BigRational::from_integer((k as i64 + 1).into()));
        }
        Poly::from_coeffs(out)
    }

    /// Exact division: returns `self / divisor` when the remainder vanishes,
    /// `None` otherwise. Panics on a zero divisor.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let t = &q * b;
                    rem[k + j] -= t;
                }
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Poly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Render with a chosen variable name, lowest degree first,
    /// e.g. `-1 + theta - 1/6*theta^3`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = mag.is_one();
            if k == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !coeff_is_one {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(var);
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::{rat, rat_int};

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn mul_and_eval() {
        let f = p(&[(1, 1), (1, 1)]); // 1 + x
        let g = p(&[(-1, 1), (1, 1)]); // -1 + x
        let h = f.mul(&g);
        assert_eq!(h, p(&[(-1, 1), (0, 1), (1, 1)]));
        assert_eq!(h.eval(&rat_int(3)), rat_int(8));
    }

    #[test]
    fn div_exact_roundtrip() {
        let f = p(&[(1, 2), (3, 1), (1, 1)]);
        let g = p(&[(-2, 3), (1, 1)]);
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(prod.div_exact(&f), Some(g));
        let off = prod.add(&Poly::one());
        assert_eq!(off.div_exact(&f), None);
    }

    #[test]
    fn integral_of_quadratic() {
        // x^2 integrates to x^3/3
        let f = Poly::monomial(rat_int(1), 2);
        assert_eq!(f.integral(), Poly::monomial(rat(1, 3), 3));
    }

    #[test]
    fn render_mixed_signs() {
        let f = p(&[(-1, 1), (1, 1), (0, 1), (-1, 6)]);
        assert_eq!(f.render("theta"), "-1 + theta - 1/6*theta^3");
        assert_eq!(Poly::zero().render("theta"), "0");
    }
}
