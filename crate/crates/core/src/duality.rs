//! Parameter- and series-level dualities. Together they reduce every
//! `|theta| > 1` computation to one with `|theta| <= 1`.

use num::rational::BigRational;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::regions::PersistenceTable;
use crate::series::Series;

/// Which duality transform applies to a parameter pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityKind {
    /// `(a, theta) -> (1/a, 1/theta)` for `a > 0`, `theta > 0`.
    PositiveSwap,
    /// `(a, theta) -> (a, 1/theta)` for `a > 0`, `theta < 0`.
    NegativeInvert,
    /// Generating-function flip `q(z) -> q(-z)/(1 - z q(-z))`.
    MoebiusFlip,
}

/// For `a > 0`, `theta > 0`: the persistence table at `(1/a, 1/theta)`
/// equals the one at `(a, theta)`.
pub fn dual_pos(params: &Params) -> Result<Params> {
    if !params.a().is_positive() || !params.theta().is_positive() {
        return Err(Error::Domain(format!(
            "positive swap needs a > 0 and theta > 0, got {params}"
        )));
    }
    Params::new(params.a().recip(), params.theta().recip())
}

/// For `a > 0`, `theta < 0`: the persistence table at `(a, 1/theta)` equals
/// the one at `(a, theta)`.
pub fn dual_neg(params: &Params) -> Result<Params> {
    if !params.a().is_positive() || !params.theta().is_negative() {
        return Err(Error::Domain(format!(
            "negative inversion needs a > 0 and theta < 0, got {params}"
        )));
    }
    Params::new(params.a().clone(), params.theta().recip())
}

/// The sign-flipped Moebius transform `q(z) -> q(-z) / (1 - z q(-z))`,
/// truncated to the order of `q`. This is the common functional form of both
/// series-level dualities; the caller chooses which parameter flip
/// accompanies it. An involution on series with unit constant term.
pub fn moebius_flip(q: &Series<BigRational>) -> Result<Series<BigRational>> {
    let order = q.order();
    let flipped: Series<BigRational> = Series::new(
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
            .collect(),
    );
    let mut denom = vec![BigRational::from_integer(1.into())];
    for k in 0..order {
        denom.push(-flipped.coeff(k).clone());
    }
    Ok(flipped.mul(&Series::new(denom).reciprocal()?))
}

/// Left-hand side minus right-hand side of the alternating convolution
/// identity linking `p_n(theta)` and `p_n(1/theta)`:
/// `p_n(theta) - sum_{k=1}^n p_{n-k}(theta) p_{k-1}(1/theta) (-1)^{k-1}
///  - (-1)^n p_n(1/theta)`.
/// Exactly zero for tables of the same `a` with `theta > 0`.
pub fn hidden_duality_residual(
    p_theta: &PersistenceTable,
    p_inv: &PersistenceTable,
    n: usize,
) -> Result<BigRational> {
    for t in [p_theta, p_inv] {
        if t.entries.len() < n + 1 {
            return Err(Error::Length {
                needed: n + 1,
                got: t.entries.len(),
            });
        }
    }
    let mut rhs = BigRational::zero();
    for k in 1..=n {
        let term = p_theta.exact(n - k) * p_inv.exact(k - 1);
        if k % 2 == 1 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    let tail = p_inv.exact(n).clone();
    if n.is_multiple_of(2) {
        rhs += tail;
    } else {
        rhs -= tail;
    }
    Ok(p_theta.exact(n) - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::rat;
    use crate::regions::persistence_series;

    fn p(an: i64, ad: i64, tn: i64, td: i64) -> Params {
        Params::from_ints(an, ad, tn, td).unwrap()
    }

    #[test]
    fn positive_swap() {
        assert_eq!(dual_pos(&p(2, 1, 3, 1)).unwrap(), p(1, 2, 1, 3));
        assert_eq!(dual_pos(&p(1, 1, 1, 1)).unwrap(), p(1, 1, 1, 1));
        let back = dual_pos(&dual_pos(&p(2, 1, 3, 1)).unwrap()).unwrap();
        assert_eq!(back, p(2, 1, 3, 1));
        assert!(dual_pos(&p(-1, 2, 3, 1)).is_err());
        assert!(dual_pos(&p(2, 1, -3, 1)).is_err());
    }

    #[test]
    fn negative_inversion() {
        assert_eq!(dual_neg(&p(3, 1, -4, 1)).unwrap(), p(3, 1, -1, 4));
        assert_eq!(dual_neg(&p(2, 1, -1, 1)).unwrap(), p(2, 1, -1, 1));
        let back = dual_neg(&dual_neg(&p(3, 1, -4, 1)).unwrap()).unwrap();
        assert_eq!(back, p(3, 1, -4, 1));
        assert!(dual_neg(&p(3, 1, 4, 1)).is_err());
    }

    #[test]
    fn flip_of_constant_one_is_geometric() {
        let q = Series::one(5);
        let t = moebius_flip(&q).unwrap();
        for k in 0..=5 {
            assert_eq!(t.coeff(k), &rat(1, 1));
        }
    }

    #[test]
    fn flip_is_involution() {
        let q = Series::new(vec![rat(1, 1), rat(1, 9), rat(-2, 7), rat(3, 5), rat(0, 1)]);
        let back = moebius_flip(&moebius_flip(&q).unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn flip_maps_grey_to_orange() {
        let grey = persistence_series(&p(-1, 4, 2, 1), 6).unwrap();
        let q = Series::new(grey.entries.iter().map(|e| e.exact.clone()).collect());
        let orange = moebius_flip(&q).unwrap();
        let expected = persistence_series(&p(-1, 4, 1, 2), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(orange.coeff(n), expected.exact(n));
        }
    }

    #[test]
    fn residual_vanishes() {
        let t = persistence_series(&p(1, 1, 2, 1), 6).unwrap();
        let ti = persistence_series(&p(1, 1, 1, 2), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(hidden_duality_residual(&t, &ti, n).unwrap(), rat(0, 1));
        }
        assert!(matches!(
            hidden_duality_residual(&t, &ti, 7),
            Err(Error::Length { .. })
        ));
    }
}
