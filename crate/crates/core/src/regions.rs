//! Per-region generating functions and closed forms for the persistence
//! probabilities, plus the dispatcher that routes any valid parameter pair
//! through trivial cases, region formulas, and dualities.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num_util::{factorial, rat_pow, rat_to_f64};
use crate::params::Params;
use crate::phase::{classify, trivial_value, RegionAssignment, RegionTag};
use crate::series::{deformed_exp_series, Series};

/// Scalars derived from `(a, theta)` that the formulas below share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedScalars {
    /// `b = -a`, the mirrored left endpoint used by the piecewise closed form.
    pub b: BigRational,
    /// `mu = (1 + a/theta)/(1 + a)`; defined only for `theta != 0`.
    pub mu: Option<BigRational>,
    /// `nu = (1 - 1/theta)/(1 + a)`, the conditioning probability of the
    /// green reduction; defined only for `theta < 0`.
    pub nu: Option<BigRational>,
    /// The index p with `theta^(p+1) < b <= theta^p`; defined for
    /// `theta in (0,1]` with `b > 0`, infinite at `theta = 1`.
    pub p_cutoff: Option<Cutoff>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cutoff {
    Finite(u64),
    Infinite,
}

pub fn derived_scalars(params: &Params) -> DerivedScalars {
    let a = params.a();
    let theta = params.theta();
    let w = params.one_plus_a();
    let b = -a.clone();
    let mu = if theta.is_zero() {
        None
    } else {
        Some((BigRational::one() + a / theta) / &w)
    };
    let nu = if theta.is_negative() {
        Some((BigRational::one() - theta.recip()) / &w)
    } else {
        None
    };
    let p_cutoff = if theta.is_positive() && *theta <= BigRational::one() && b.is_positive() {
        if theta.is_one() {
            Some(Cutoff::Infinite)
        } else {
            let mut p: u64 = 0;
            let mut pow = theta.clone(); // theta^(p+1)
            while pow >= b {
                p += 1;
                pow *= theta;
            }
            Some(Cutoff::Finite(p))
        }
    } else {
        None
    };
    DerivedScalars {
        b,
        mu,
        nu,
        p_cutoff,
    }
}

/// Which computation path produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BlueGf,
    GreenGf,
    YellowGf,
    OrangeGf,
    GreyClosed,
    Recurrence,
    Combinatorial,
    Duality,
    Trivial,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::BlueGf => "blue_gf",
            Method::GreenGf => "green_gf",
            Method::YellowGf => "yellow_gf",
            Method::OrangeGf => "orange_gf",
            Method::GreyClosed => "grey_closed",
            Method::Recurrence => "recurrence",
            Method::Combinatorial => "combinatorial",
            Method::Duality => "duality",
            Method::Trivial => "trivial",
            Method::Oracle => "oracle",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One table row: the exact probability and its f64 shadow.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub n: usize,
    pub exact: BigRational,
    pub shadow: f64,
}

/// Exact persistence probabilities `p_0..p_N` for one parameter pair.
/// Construction enforces `p_0 = 1`, `0 <= p_n <= 1` and monotonicity; a
/// violation is a bug in the producing formula, not a user error.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceTable {
    pub params: Params,
    pub entries: Vec<Entry>,
    pub method: Method,
}

impl PersistenceTable {
    pub fn new(params: Params, exact: Vec<BigRational>, method: Method) -> Self {
        assert!(!exact.is_empty());
        assert!(exact[0].is_one(), "p_0 must be 1 at {params} via {method}");
        for w in exact.windows(2) {
            assert!(w[1] <= w[0], "p_n must be nonincreasing at {params} via {method}");
        }
        assert!(
            !exact.last().unwrap().is_negative(),
            "p_n must be nonnegative at {params} via {method}"
        );
        let entries = exact
            .into_iter()
            .enumerate()
            .map(|(n, exact)| {
                let shadow = rat_to_f64(&exact);
                Entry { n, exact, shadow }
            })
            .collect();
        PersistenceTable {
            params,
            entries,
            method,
        }
    }

    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn exact(&self, n: usize) -> &BigRational {
        &self.entries[n].exact
    }
}

/// Blue-region generating function
/// `(E(theta, az/(1+a)) - E(theta, -z/(1+a))) / (z E(theta, -z/(1+a)))`;
/// its coefficients are the blue persistence probabilities.
pub fn blue_gf(params: &Params, order: usize) -> Result<Series<BigRational>> {
    let theta = params.theta();
    let w = params.one_plus_a();
    let scale_pos = params.a() / &w;
    let scale_neg = -w.recip();
    let numerator = deformed_exp_series(theta, &scale_pos, order + 1)
        .sub(&deformed_exp_series(theta, &scale_neg, order + 1));
    let shifted = numerator.shift_down()?;
    let denom_inv = deformed_exp_series(theta, &scale_neg, order).reciprocal()?;
    Ok(shifted.mul(&denom_inv))
}

/// The recursion extracted from the iterated persistence integral; agrees
/// coefficient-by-coefficient with [`blue_gf`] inside the blue region.
pub fn blue_recurrence_pn(params: &Params, n: usize) -> BigRational {
    let theta = params.theta();
    let a = params.a();
    let inv_w = params.one_plus_a().recip();
    let mut table: Vec<BigRational> = Vec::with_capacity(n + 1);
    table.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            let sign = if k % 2 == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            let term = sign
                * rat_pow(theta, (k * (k - 1) / 2) as u64)
                * rat_pow(&inv_w, k as u64)
                / BigRational::from_integer(factorial(k))
                * &table[m - k];
            acc += term;
        }
        let sign = if m % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let boundary = rat_pow(&inv_w, (m + 1) as u64)
            * sign
            * rat_pow(theta, (m * (m + 1) / 2) as u64)
            * (BigRational::one() - rat_pow(&(-a.clone()), (m + 1) as u64))
            / BigRational::from_integer(factorial(m + 1));
        acc += boundary;
        table.push(acc);
    }
    table.pop().unwrap()
}

/// Green-region generating function
/// `(theta a + 1)/(theta(1+a)) + (E(theta, -z/(theta(1+a))) - E(theta, -z/(1+a))) / (z E(theta, -z/(1+a)))`.
pub fn green_gf(params: &Params, order: usize) -> Result<Series<BigRational>> {
    let theta = params.theta();
    if theta.is_zero() {
        return Err(Error::DivisionByZeroTheta);
    }
    let w = params.one_plus_a();
    let scale_theta = -(theta * &w).recip();
    let scale_neg = -w.recip();
    let numerator = deformed_exp_series(theta, &scale_theta, order + 1)
        .sub(&deformed_exp_series(theta, &scale_neg, order + 1));
    let shifted = numerator.shift_down()?;
    let denom_inv = deformed_exp_series(theta, &scale_neg, order).reciprocal()?;
    let mut gf = shifted.mul(&denom_inv);
    let constant = (theta * params.a() + BigRational::one()) / (theta * &w);
    let mut coeffs = gf.coeffs().to_vec();
    coeffs[0] += constant;
    gf = Series::new(coeffs);
    // The formula reproduces p_0 = 1 on its own; check instead of overwriting.
    assert!(gf.coeff(0).is_one(), "green normalization failed at {params}");
    Ok(gf)
}

/// Yellow-region generating function: the reciprocal of
/// `E(theta, az/(theta(1+a))) / E(theta, az/(1+a)) - mu z`, minus one,
/// divided by z.
pub fn yellow_gf(params: &Params, order: usize) -> Result<Series<BigRational>> {
    let theta = params.theta();
    if theta.is_zero() {
        return Err(Error::DivisionByZeroTheta);
    }
    let w = params.one_plus_a();
    let mu = derived_scalars(params).mu.expect("theta != 0");
    let scale_inner = params.a() / (theta * &w);
    let scale_outer = params.a() / &w;
    let ratio = deformed_exp_series(theta, &scale_inner, order + 1)
        .mul(&deformed_exp_series(theta, &scale_outer, order + 1).reciprocal()?);
    let mut bracket = ratio.coeffs().to_vec();
    bracket[1] -= mu;
    let reciprocal = Series::new(bracket).reciprocal()?;
    reciprocal.sub(&Series::one(order + 1)).shift_down()
}

/// The kernel series of the orange region: coefficient `i` is
/// `(-1)^i (theta^i - b)_+^{i+1} / ((i+1)! theta^(i(i+1)/2) (1-b)^{i+1})`
/// with `b = -a` and `(x)_+ = max(x, 0)`. Always emitted to the requested
/// order, zero-padded once the positive part vanishes.
pub fn orange_f(params: &Params, order: usize) -> Series<BigRational> {
    let theta = params.theta();
    let b = -params.a().clone();
    let w = params.one_plus_a(); // = 1 - b
    debug_assert!(theta.is_positive() && *theta <= BigRational::one());
    debug_assert!(!b.is_negative() && b <= *theta);
    let mut coeffs = Vec::with_capacity(order + 1);
    for i in 0..=order {
        let x = rat_pow(theta, i as u64) - &b;
        if !x.is_positive() {
            coeffs.push(BigRational::zero());
            continue;
        }
        let sign = if i % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let value = sign * rat_pow(&x, (i + 1) as u64)
            / (BigRational::from_integer(factorial(i + 1))
                * rat_pow(theta, (i * (i + 1) / 2) as u64)
                * rat_pow(&w, (i + 1) as u64));
        coeffs.push(value);
    }
    Series::new(coeffs)
}

/// Orange-region generating function `F(z) / (1 - z F(z))`.
pub fn orange_gf(params: &Params, order: usize) -> Result<Series<BigRational>> {
    let f = orange_f(params, order);
    let mut denom = vec![BigRational::one()];
    for k in 0..order {
        denom.push(-f.coeff(k).clone());
    }
    Ok(f.mul(&Series::new(denom).reciprocal()?))
}

/// Piecewise closed form for `a in (-1, 0]` with `1 <= theta <= -1/a`:
/// `p_n = theta^(n(n+1)/2) / ((1-b)^{n+1} (n+1)!) * (theta^{-n} - b)_+^{n+1}`.
pub fn grey_pn(params: &Params, n: usize) -> BigRational {
    let theta = params.theta();
    let b = -params.a().clone();
    let w = params.one_plus_a(); // = 1 - b
    let x = rat_pow(theta, n as u64).recip() - &b;
    if !x.is_positive() {
        return BigRational::zero();
    }
    rat_pow(theta, (n * (n + 1) / 2) as u64) * rat_pow(&x, (n + 1) as u64)
        / (rat_pow(&w, (n + 1) as u64) * BigRational::from_integer(factorial(n + 1)))
}

/// Compute `p_0..p_order` for any valid parameter pair: trivial cases first,
/// then the canonical region formula, resolving parameter dualities in one
/// hop.
pub fn persistence_series(params: &Params, order: usize) -> Result<PersistenceTable> {
    let assignment = classify(params);
    let (exact, method) = region_values(params, &assignment, order)?;
    Ok(PersistenceTable::new(params.clone(), exact, method))
}

fn region_values(
    params: &Params,
    assignment: &RegionAssignment,
    order: usize,
) -> Result<(Vec<BigRational>, Method)> {
    match assignment.canonical {
        RegionTag::WhiteOne | RegionTag::ZeroTail | RegionTag::ThetaOne => {
            let exact = (0..=order)
                .map(|n| trivial_value(params, n).expect("canonical trivial tag"))
                .collect();
            Ok((exact, Method::Trivial))
        }
        RegionTag::Blue => Ok((blue_gf(params, order)?.coeffs().to_vec(), Method::BlueGf)),
        RegionTag::Green => Ok((green_gf(params, order)?.coeffs().to_vec(), Method::GreenGf)),
        RegionTag::Yellow => Ok((
            yellow_gf(params, order)?.coeffs().to_vec(),
            Method::YellowGf,
        )),
        RegionTag::Orange => Ok((
            orange_gf(params, order)?.coeffs().to_vec(),
            Method::OrangeGf,
        )),
        RegionTag::GreyPiecewise => {
            let exact = (0..=order).map(|n| grey_pn(params, n)).collect();
            Ok((exact, Method::GreyClosed))
        }
        RegionTag::DualPositive | RegionTag::DualNegative => {
            let target = assignment.dual_target.as_ref().ok_or(Error::Unreachable)?;
            let inner = classify(target);
            let (exact, _) = region_values(target, &inner, order)?;
            Ok((exact, Method::Duality))
        }
        RegionTag::DualFlip => Err(Error::Unreachable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::rat;
    use crate::oracle::dp_exact_pn;

    fn p(an: i64, ad: i64, tn: i64, td: i64) -> Params {
        Params::from_ints(an, ad, tn, td).unwrap()
    }

    #[test]
    fn blue_symmetric_half() {
        let gf = blue_gf(&p(1, 1, 1, 2), 4).unwrap();
        assert_eq!(gf.coeff(0), &rat(1, 1));
        assert_eq!(gf.coeff(1), &rat(1, 2));
    }

    #[test]
    fn blue_at_a_zero_matches_reciprocal_coefficients() {
        let gf = blue_gf(&p(0, 1, 1, 2), 4).unwrap();
        assert_eq!(gf.coeff(1), &rat(3, 4));
        assert_eq!(gf.coeff(2), &rat(25, 48));
    }

    #[test]
    fn blue_theta_one_gives_factorial_law() {
        let gf = blue_gf(&p(3, 1, 1, 1), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(
                gf.coeff(n),
                &BigRational::new(1.into(), factorial(n + 1))
            );
        }
    }

    #[test]
    fn recurrence_agrees_with_gf() {
        for params in [p(0, 1, 1, 2), p(1, 1, 1, 2), p(2, 1, 3, 4), p(1, 1, -1, 2)] {
            let gf = blue_gf(&params, 10).unwrap();
            for n in 0..=10 {
                assert_eq!(&blue_recurrence_pn(&params, n), gf.coeff(n), "{params} n={n}");
            }
        }
        assert_eq!(blue_recurrence_pn(&p(0, 1, 1, 2), 1), rat(3, 4));
        assert_eq!(blue_recurrence_pn(&p(1, 1, 1, 1), 3), rat(1, 24));
        assert_eq!(blue_recurrence_pn(&p(2, 1, 0, 1), 4), rat(1, 81));
    }

    #[test]
    fn green_normalizes_and_matches_oracle() {
        let gf = green_gf(&p(2, 1, -1, 2), 8).unwrap();
        assert_eq!(gf.coeff(0), &rat(1, 1));
        assert_eq!(gf.coeff(1), &rat(1, 4));
        let gf4 = green_gf(&p(4, 1, -1, 2), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(gf4.coeff(n), &dp_exact_pn(&p(4, 1, -1, 2), n).unwrap());
        }
        assert_eq!(green_gf(&p(2, 1, 0, 1), 3), Err(Error::DivisionByZeroTheta));
    }

    #[test]
    fn yellow_matches_oracle() {
        let gf = yellow_gf(&p(1, 4, -1, 2), 8).unwrap();
        assert_eq!(gf.coeff(1), &rat(91, 100));
        for n in 0..=8 {
            assert_eq!(gf.coeff(n), &dp_exact_pn(&p(1, 4, -1, 2), n).unwrap());
        }
        let flat = yellow_gf(&p(0, 1, -1, 2), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(flat.coeff(n), &rat(1, 1));
        }
        let gf2 = yellow_gf(&p(1, 2, -1, 2), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(gf2.coeff(n), &dp_exact_pn(&p(1, 2, -1, 2), n).unwrap());
        }
    }

    #[test]
    fn orange_kernel_truncates_to_two_terms() {
        // At a = -1/4, theta = 1/2 the i = 2 term vanishes because theta^2 = b.
        let f = orange_f(&p(-1, 4, 1, 2), 5);
        assert_eq!(f.coeff(0), &rat(1, 1));
        assert_eq!(f.coeff(1), &rat(-1, 9));
        for k in 2..=5 {
            assert_eq!(f.coeff(k), &rat(0, 1));
        }
    }

    #[test]
    fn orange_kernel_at_theta_one() {
        let f = orange_f(&p(-1, 2, 1, 1), 5);
        for i in 0..=5 {
            let expected = BigRational::new(
                if i % 2 == 0 { 1.into() } else { (-1).into() },
                factorial(i + 1),
            );
            assert_eq!(f.coeff(i), &expected);
        }
    }

    #[test]
    fn orange_kernel_at_a_zero_matches_flipped_grey() {
        // b = 0: coefficient i is (-1)^i theta^(i(i+1)/2) / (i+1)!
        let f = orange_f(&p(0, 1, 1, 2), 5);
        for i in 0..=5u64 {
            let sign = if i % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            let expected = sign * rat_pow(&rat(1, 2), i * (i + 1) / 2)
                / BigRational::from_integer(factorial(i as usize + 1));
            assert_eq!(f.coeff(i as usize), &expected);
        }
    }

    #[test]
    fn orange_gf_values() {
        let gf = orange_gf(&p(-1, 4, 1, 2), 6).unwrap();
        assert_eq!(gf.coeff(0), &rat(1, 1));
        assert_eq!(gf.coeff(1), &rat(8, 9));
        for n in 0..=6 {
            assert_eq!(gf.coeff(n), &dp_exact_pn(&p(-1, 4, 1, 2), n).unwrap());
        }
        // theta = 1 reduces to the factorial law
        let gf1 = orange_gf(&p(-1, 2, 1, 1), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(gf1.coeff(n), &BigRational::new(1.into(), factorial(n + 1)));
        }
        // a = 0 boundary agrees with blue
        let gfo = orange_gf(&p(0, 1, 1, 2), 8).unwrap();
        let gfb = blue_gf(&p(0, 1, 1, 2), 8).unwrap();
        assert_eq!(gfo, gfb);
    }

    #[test]
    fn grey_closed_form() {
        assert_eq!(grey_pn(&p(-1, 4, 2, 1), 1), rat(1, 9));
        assert_eq!(grey_pn(&p(-1, 4, 2, 1), 2), rat(0, 1));
        assert_eq!(grey_pn(&p(0, 1, 2, 1), 3), rat(1, 1536));
        assert_eq!(grey_pn(&p(0, 1, 1, 1), 4), rat(1, 120));
    }

    #[test]
    fn grey_b_zero_generating_function() {
        // at a = 0 the piecewise table sums to (E(1/theta, z) - 1)/z
        use crate::series::{deformed_exp_series, Series};
        for theta in [rat(2, 1), rat(3, 1), rat(5, 2)] {
            let point = Params::new(rat(0, 1), theta.clone()).unwrap();
            let gf: Series<BigRational> =
                deformed_exp_series(&theta.recip(), &rat(1, 1), 9)
                    .sub(&Series::one(9))
                    .shift_down()
                    .unwrap();
            for n in 0..=8 {
                assert_eq!(&grey_pn(&point, n), gf.coeff(n), "theta = {theta}, n = {n}");
            }
        }
    }

    #[test]
    fn derived_scalars_cutoff() {
        let d = derived_scalars(&p(-1, 4, 1, 2));
        assert_eq!(d.b, rat(1, 4));
        assert_eq!(d.p_cutoff, Some(Cutoff::Finite(2)));
        let d1 = derived_scalars(&p(-1, 2, 1, 1));
        assert_eq!(d1.p_cutoff, Some(Cutoff::Infinite));
        assert_eq!(derived_scalars(&p(0, 1, 1, 2)).p_cutoff, None);
        let dm = derived_scalars(&p(1, 4, -1, 2));
        assert_eq!(dm.mu, Some(rat(2, 5)));
        assert_eq!(dm.nu, Some(rat(12, 5)));
    }

    #[test]
    fn dispatcher_routes_dualities() {
        let t = persistence_series(&p(2, 1, 3, 1), 6).unwrap();
        assert_eq!(t.method, Method::Duality);
        let direct = blue_gf(&p(1, 2, 1, 3), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(t.exact(n), direct.coeff(n));
        }
        let t2 = persistence_series(&p(3, 1, -4, 1), 6).unwrap();
        let t3 = persistence_series(&p(3, 1, -1, 4), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(t2.exact(n), t3.exact(n));
        }
    }

    #[test]
    fn dispatcher_trivial_routes() {
        let t = persistence_series(&p(-1, 3, 1, 5), 6).unwrap();
        assert_eq!(t.method, Method::Trivial);
        for n in 0..=6 {
            assert_eq!(t.exact(n), &rat(1, 1));
        }
        let z = persistence_series(&p(-1, 2, 3, 1), 4).unwrap();
        assert_eq!(z.exact(0), &rat(1, 1));
        for n in 1..=4 {
            assert_eq!(z.exact(n), &rat(0, 1));
        }
    }

    #[test]
    fn tables_are_monotone_with_bounds() {
        for params in [
            p(2, 1, 1, 2),
            p(3, 1, -1, 2),
            p(1, 4, -1, 2),
            p(-1, 4, 1, 2),
            p(-1, 4, 2, 1),
            p(2, 1, 3, 1),
        ] {
            let t = persistence_series(&params, 8).unwrap();
            for w in t.entries.windows(2) {
                assert!(w[1].exact <= w[0].exact);
            }
            assert!(t.entries.iter().all(|e| !e.exact.is_negative()));
        }
    }
}
