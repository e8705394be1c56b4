//! Persistence exponents: the geometric decay rate `lambda = 1/z0`, where
//! `z0` is the smallest positive root of the region's denominator equation.
//!
//! All sign decisions are made on exact rationals: a partial sum of the
//! deformed exponential plus a rational tail bound either separates the value
//! from zero or the term count is doubled. Floating point appears only in the
//! reported midpoints and radii.

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num_util::{rat_int, rat_to_f64};
use crate::params::Params;
use crate::phase::{classify, RegionTag};
use crate::poly::Poly;
use crate::regions::{derived_scalars, orange_f, Cutoff};

/// Default root-finding tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A floating-point interval reported as midpoint and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub mid: f64,
    pub rad: f64,
}

impl Enclosure {
    pub fn contains(&self, x: f64) -> bool {
        (self.mid - x).abs() <= self.rad
    }

    pub fn exact(x: f64) -> Self {
        Enclosure { mid: x, rad: 0.0 }
    }
}

/// Which equation (or trivial rule) produced the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentKind {
    /// Smallest positive root of `E(theta, -z/(1+a)) = 0` (blue and green).
    RootOfE,
    /// Smallest positive root of the yellow denominator equation.
    YellowEquation,
    /// Smallest positive root of the polynomial `z F(z) = 1` (orange, b > 0).
    OrangePolynomial,
    /// Decay faster than any exponential (theta = 1 line and the piecewise
    /// closed-form region); the ratio p_{n+1}/p_n tends to 0.
    Superexponential,
    /// All-ones region: lambda = 1.
    TrivialOne,
    /// Zero-tail region: p_n = 0 from n = 1 on.
    TrivialZero,
    /// No sign change found in the scanned window.
    NotFound,
}

impl ExponentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExponentKind::RootOfE => "RootOfE",
            ExponentKind::YellowEquation => "YellowEquation",
            ExponentKind::OrangePolynomial => "OrangePolynomial",
            ExponentKind::Superexponential => "Superexponential",
            ExponentKind::TrivialOne => "TrivialOne",
            ExponentKind::TrivialZero => "TrivialZero",
            ExponentKind::NotFound => "NotFound",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentResult {
    pub kind: ExponentKind,
    /// Enclosure of the denominator root; absent for trivial kinds without a
    /// finite root and for NotFound.
    pub z0: Option<Enclosure>,
    /// Enclosure of `lambda = 1/z0` (or the trivial rate).
    pub lambda: Option<Enclosure>,
    /// Leading asymptotic constant, populated when the blue formula applies.
    pub constant: Option<f64>,
    /// The tolerance the search was asked for.
    pub precision: f64,
    /// Upper end of the scanned window (diagnostic, meaningful for NotFound).
    pub z_max: f64,
}

/// Exact partial sum of `E(theta, x)` through `terms` terms together with a
/// rational upper bound on the dropped tail. Requires `|theta| <= 1`; the
/// bound is `|t_{N+1}| * e^{|x|}` with `e^{|x|} <= 3^ceil(|x|)`, sharpened by
/// the monotone theta powers.
fn deformed_exp_partial(
    theta: &BigRational,
    x: &BigRational,
    terms: usize,
) -> (BigRational, BigRational) {
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    let mut theta_pow = BigRational::one(); // theta^(k-1) while computing term k
    for k in 1..=terms {
        term = term * &theta_pow * x / BigRational::from_integer(k.into());
        sum += &term;
        theta_pow *= theta;
    }
    let next = (term * &theta_pow * x / BigRational::from_integer((terms as i64 + 1).into())).abs();
    (sum, next * exp_upper_bound(&x.abs()))
}

/// A rational upper bound for `e^x`, `x >= 0`.
fn exp_upper_bound(x: &BigRational) -> BigRational {
    let ceil: BigInt = x.numer().div_ceil(x.denom());
    let e = ceil.max(BigInt::zero()).to_u32().unwrap_or(u32::MAX);
    BigRational::from_integer(BigInt::from(3u32).pow(e))
}

const MAX_TERMS: usize = 2048;

/// Rigorous sign of `E(theta, x)`: +1, -1, Some(0) when the partial sum is
/// exact (degenerate theta), or None when the value cannot be separated from
/// zero within the term budget.
fn deformed_exp_sign(theta: &BigRational, x: &BigRational, mut terms: usize) -> Option<i8> {
    loop {
        let (sum, tail) = deformed_exp_partial(theta, x, terms);
        if tail.is_zero() {
            return Some(rational_sign(&sum));
        }
        if sum.abs() > tail {
            return Some(rational_sign(&sum));
        }
        if terms >= MAX_TERMS {
            return None;
        }
        terms *= 2;
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Midpoint-radius evaluation of `E(theta, x)` with radius at most `tol`.
/// Radius accounts for both the series truncation and the final float
/// conversions.
pub fn deformed_exp_enclosure(
    theta: &BigRational,
    x: &BigRational,
    tol: f64,
) -> Result<Enclosure> {
    if theta.abs() > BigRational::one() {
        return Err(Error::Domain(format!(
            "rigorous evaluation needs |theta| <= 1, got {theta}"
        )));
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Domain(format!("tolerance must be positive: {tol}")));
    }
    // the tail factor 3^ceil(|x|) and the term count both blow up with |x|
    if x.abs() > rat_int(10_000) {
        return Err(Error::Domain(format!(
            "argument magnitude {x} is too large for rigorous evaluation"
        )));
    }
    let target = BigRational::from_float(tol / 2.0)
        .ok_or_else(|| Error::Domain("tolerance is not finite".into()))?;
    let mut terms = 8;
    loop {
        let (sum, tail) = deformed_exp_partial(theta, x, terms);
        if tail <= target {
            let mid = rat_to_f64(&sum);
            let rad = rat_to_f64(&tail) * (1.0 + 1e-9) + mid.abs() * 1e-15 + f64::MIN_POSITIVE;
            return Ok(Enclosure { mid, rad });
        }
        if terms >= (1 << 22) {
            return Err(Error::Domain(format!(
                "tail bound did not reach {tol} at x = {x}"
            )));
        }
        terms *= 2;
    }
}

enum Scan {
    ExactRoot(BigRational),
    Bracket(BigRational, BigRational, i8),
    NoChange,
}

/// Walk `(0, z_max]` geometrically (factor 3/2) looking for the first sign
/// change of `f`, which is `start_sign` just right of zero.
fn scan_sign_change<F>(f: &F, start: &BigRational, z_max: &BigRational, start_sign: i8) -> Scan
where
    F: Fn(&BigRational) -> Option<i8>,
{
    let step = BigRational::new(3.into(), 2.into());
    let mut prev = BigRational::zero();
    let mut prev_sign = start_sign;
    let mut z = start.clone();
    loop {
        let at = if &z > z_max { z_max.clone() } else { z.clone() };
        match eval_with_nudge(f, &at) {
            Some(0) => return Scan::ExactRoot(at),
            Some(s) if s != prev_sign => return Scan::Bracket(prev, at, prev_sign),
            Some(s) => {
                prev = at.clone();
                prev_sign = s;
            }
            // Could not separate the value from zero: treat the point as a
            // root candidate and let bisection settle the interval around it.
            None => return Scan::Bracket(prev, &at * &step, prev_sign),
        }
        if &at == z_max {
            return Scan::NoChange;
        }
        z *= &step;
    }
}

/// Evaluate, retrying at minutely perturbed points if the sign is
/// undetermined (the perturbation keeps bisection sound: any point with a
/// determined sign is usable).
fn eval_with_nudge<F>(f: &F, z: &BigRational) -> Option<i8>
where
    F: Fn(&BigRational) -> Option<i8>,
{
    if let Some(s) = f(z) {
        return Some(s);
    }
    let eps = BigRational::new(1.into(), BigInt::from(1u64 << 20));
    for factor in [
        BigRational::one() + &eps,
        BigRational::one() - &eps,
    ] {
        if let Some(s) = f(&(z * &factor)) {
            return Some(s);
        }
    }
    None
}

/// Shrink a sign-change bracket below `tol`. Midpoints with undetermined
/// signs fall back to off-center splits; if every candidate is undetermined
/// the current (still correct) bracket is returned.
fn bisect<F>(
    f: &F,
    mut lo: BigRational,
    mut hi: BigRational,
    lo_sign: i8,
    tol: &BigRational,
) -> (BigRational, BigRational)
where
    F: Fn(&BigRational) -> Option<i8>,
{
    let splits = [
        BigRational::new(1.into(), 2.into()),
        BigRational::new(13.into(), 32.into()),
        BigRational::new(19.into(), 32.into()),
    ];
    while &hi - &lo > *tol {
        let mut advanced = false;
        for frac in &splits {
            let mid = &lo + (&hi - &lo) * frac;
            match f(&mid) {
                Some(0) => return (mid.clone(), mid),
                Some(s) if s == lo_sign => {
                    lo = mid;
                    advanced = true;
                    break;
                }
                Some(_) => {
                    hi = mid;
                    advanced = true;
                    break;
                }
                None => continue,
            }
        }
        if !advanced {
            break;
        }
    }
    (lo, hi)
}

fn enclosure_from_bracket(lo: &BigRational, hi: &BigRational) -> Enclosure {
    let mid_rat = (lo + hi) / rat_int(2);
    let rad_rat = (hi - lo) / rat_int(2);
    let mid = rat_to_f64(&mid_rat);
    let rad = rat_to_f64(&rad_rat) * (1.0 + 1e-9) + mid.abs() * 4e-16 + f64::MIN_POSITIVE;
    Enclosure { mid, rad }
}

fn lambda_from_bracket(lo: &BigRational, hi: &BigRational) -> Enclosure {
    assert!(lo.is_positive() || hi.is_positive());
    if lo.is_zero() {
        // Degenerate bracket touching zero; only an upper bound on z0.
        let mid = rat_to_f64(&hi.recip());
        return Enclosure {
            mid,
            rad: f64::INFINITY,
        };
    }
    let inv_lo = lo.recip();
    let inv_hi = hi.recip();
    let mid_rat = (&inv_lo + &inv_hi) / rat_int(2);
    let rad_rat = (&inv_lo - &inv_hi) / rat_int(2);
    let mid = rat_to_f64(&mid_rat);
    let rad = rat_to_f64(&rad_rat) * (1.0 + 1e-9) + mid.abs() * 4e-16 + f64::MIN_POSITIVE;
    Enclosure { mid, rad }
}

/// Find the persistence exponent for any valid parameter pair. Dualities are
/// resolved first (they preserve the whole table, hence the rate), trivial
/// regions answer directly, and the remaining regions run a rigorous
/// root search on their denominator equation over `(0, 64(1+a)]`.
pub fn find_exponent(params: &Params, tol: f64) -> Result<ExponentResult> {
    let assignment = classify(params);
    let resolved = match &assignment.dual_target {
        Some(target) => target.clone(),
        None => params.clone(),
    };
    let resolved_assignment = classify(&resolved);
    let theta = resolved.theta().clone();
    let w = resolved.one_plus_a();
    let z_max = rat_int(64) * &w;
    let z_max_f = rat_to_f64(&z_max);
    let tol_rat = BigRational::from_float(tol)
        .filter(|t| t.is_positive())
        .ok_or_else(|| Error::Domain(format!("tolerance must be positive: {tol}")))?;

    let mut result = match resolved_assignment.canonical {
        RegionTag::WhiteOne => ExponentResult {
            kind: ExponentKind::TrivialOne,
            z0: Some(Enclosure::exact(1.0)),
            lambda: Some(Enclosure::exact(1.0)),
            constant: None,
            precision: tol,
            z_max: z_max_f,
        },
        RegionTag::ZeroTail => ExponentResult {
            kind: ExponentKind::TrivialZero,
            z0: None,
            lambda: Some(Enclosure::exact(0.0)),
            constant: None,
            precision: tol,
            z_max: z_max_f,
        },
        RegionTag::ThetaOne | RegionTag::GreyPiecewise => ExponentResult {
            kind: ExponentKind::Superexponential,
            z0: None,
            lambda: Some(Enclosure::exact(0.0)),
            constant: None,
            precision: tol,
            z_max: z_max_f,
        },
        RegionTag::Blue | RegionTag::Green => {
            if theta.is_zero() {
                // E(0, -z/(1+a)) = 1 - z/(1+a): the root is exactly 1+a.
                let z0 = rat_to_f64(&w);
                let lam = rat_to_f64(&w.recip());
                ExponentResult {
                    kind: ExponentKind::RootOfE,
                    z0: Some(Enclosure::exact(z0)),
                    lambda: Some(Enclosure {
                        mid: lam,
                        rad: lam.abs() * 2e-16,
                    }),
                    constant: None,
                    precision: tol,
                    z_max: z_max_f,
                }
            } else {
                let inv_w = w.recip();
                let sign_fn =
                    |z: &BigRational| deformed_exp_sign(&theta, &(-(z * &inv_w)), 16);
                root_result(
                    &sign_fn,
                    ExponentKind::RootOfE,
                    &w,
                    &z_max,
                    &tol_rat,
                    tol,
                    z_max_f,
                )
            }
        }
        RegionTag::Yellow => {
            let scalars = derived_scalars(&resolved);
            let mu = scalars.mu.expect("yellow has theta < 0");
            let scale_inner = resolved.a() / (&theta * &w);
            let scale_outer = resolved.a() / &w;
            let sign_fn = |z: &BigRational| {
                yellow_denominator_sign(&theta, &scale_inner, &scale_outer, &mu, z)
            };
            root_result(
                &sign_fn,
                ExponentKind::YellowEquation,
                &w,
                &z_max,
                &tol_rat,
                tol,
                z_max_f,
            )
        }
        RegionTag::Orange => {
            let scalars = derived_scalars(&resolved);
            match scalars.p_cutoff {
                Some(Cutoff::Finite(p)) => {
                    let f = orange_f(&resolved, p as usize);
                    // h(z) = z F(z) - 1, exact polynomial of degree p+1
                    let mut coeffs = vec![-BigRational::one()];
                    coeffs.extend(f.coeffs().iter().cloned());
                    let h = Poly::from_coeffs(coeffs);
                    let sign_fn = |z: &BigRational| Some(rational_sign(&h.eval(z)));
                    // h(0) = -1
                    root_result_signed(
                        &sign_fn,
                        ExponentKind::OrangePolynomial,
                        &w,
                        &z_max,
                        &tol_rat,
                        tol,
                        z_max_f,
                        -1,
                    )
                }
                // Orange is canonical only for b in (0, theta), theta < 1;
                // the boundaries route to White/Blue/ThetaOne instead.
                _ => return Err(Error::Unreachable),
            }
        }
        RegionTag::DualPositive | RegionTag::DualNegative | RegionTag::DualFlip => {
            return Err(Error::Unreachable)
        }
    };

    // The blue asymptotic constant, whenever the blue formula covers the
    // resolved parameters and a rate was found.
    if resolved_assignment.applicable.contains(&RegionTag::Blue) {
        if let Some(lambda) = &result.lambda {
            if lambda.rad.is_finite() && lambda.mid > 0.0 {
                result.constant = Some(asymptotic_constant(&resolved, lambda)?);
            }
        }
    }
    Ok(result)
}

fn yellow_denominator_sign(
    theta: &BigRational,
    scale_inner: &BigRational,
    scale_outer: &BigRational,
    mu: &BigRational,
    z: &BigRational,
) -> Option<i8> {
    // Sign of E(theta, scale_inner*z) - mu*z*E(theta, scale_outer*z): both
    // series are summed with the same term count and the tails add.
    let mut terms = 16;
    loop {
        let (s1, t1) = deformed_exp_partial(theta, &(scale_inner * z), terms);
        let (s2, t2) = deformed_exp_partial(theta, &(scale_outer * z), terms);
        let factor = mu * z;
        let value = s1 - &factor * s2;
        let err = t1 + factor.abs() * t2;
        if err.is_zero() || value.abs() > err {
            return Some(rational_sign(&value));
        }
        if terms >= MAX_TERMS {
            return None;
        }
        terms *= 2;
    }
}

#[allow(clippy::too_many_arguments)]
fn root_result<F>(
    sign_fn: &F,
    kind: ExponentKind,
    w: &BigRational,
    z_max: &BigRational,
    tol_rat: &BigRational,
    tol: f64,
    z_max_f: f64,
) -> ExponentResult
where
    F: Fn(&BigRational) -> Option<i8>,
{
    root_result_signed(sign_fn, kind, w, z_max, tol_rat, tol, z_max_f, 1)
}

#[allow(clippy::too_many_arguments)]
fn root_result_signed<F>(
    sign_fn: &F,
    kind: ExponentKind,
    w: &BigRational,
    z_max: &BigRational,
    tol_rat: &BigRational,
    tol: f64,
    z_max_f: f64,
    start_sign: i8,
) -> ExponentResult
where
    F: Fn(&BigRational) -> Option<i8>,
{
    let start = w / rat_int(64);
    match scan_sign_change(sign_fn, &start, z_max, start_sign) {
        Scan::ExactRoot(z) => {
            let z0 = rat_to_f64(&z);
            let lam = rat_to_f64(&z.recip());
            ExponentResult {
                kind,
                z0: Some(Enclosure::exact(z0)),
                lambda: Some(Enclosure {
                    mid: lam,
                    rad: lam.abs() * 2e-16,
                }),
                constant: None,
                precision: tol,
                z_max: z_max_f,
            }
        }
        Scan::Bracket(lo, hi, lo_sign) => {
            let (lo, hi) = bisect(sign_fn, lo, hi, lo_sign, tol_rat);
            if lo == hi {
                let z0 = rat_to_f64(&lo);
                let lam = rat_to_f64(&lo.recip());
                return ExponentResult {
                    kind,
                    z0: Some(Enclosure::exact(z0)),
                    lambda: Some(Enclosure {
                        mid: lam,
                        rad: lam.abs() * 2e-16,
                    }),
                    constant: None,
                    precision: tol,
                    z_max: z_max_f,
                };
            }
            ExponentResult {
                kind,
                z0: Some(enclosure_from_bracket(&lo, &hi)),
                lambda: Some(lambda_from_bracket(&lo, &hi)),
                constant: None,
                precision: tol,
                z_max: z_max_f,
            }
        }
        Scan::NoChange => ExponentResult {
            kind: ExponentKind::NotFound,
            z0: None,
            lambda: None,
            constant: None,
            precision: tol,
            z_max: z_max_f,
        },
    }
}

/// The constant `C` with `p_n ~ C * lambda^{n+2}` in the blue region:
/// `C = (1+a) E(theta, a/(lambda(1+a))) / E(theta, -theta/(lambda(1+a)))`.
pub fn asymptotic_constant(params: &Params, lambda: &Enclosure) -> Result<f64> {
    if !classify(params).applicable.contains(&RegionTag::Blue) {
        return Err(Error::Domain(format!(
            "asymptotic constant is defined on the blue region, got {params}"
        )));
    }
    let lam = BigRational::from_float(lambda.mid)
        .filter(|l| l.is_positive())
        .ok_or_else(|| Error::Domain("lambda must be positive and finite".into()))?;
    let w = params.one_plus_a();
    let denom_scale = (&lam * &w).recip();
    let x_num = params.a() * &denom_scale;
    let x_den = -params.theta() * &denom_scale;
    let e_num = deformed_exp_enclosure(params.theta(), &x_num, 1e-13)?;
    let e_den = deformed_exp_enclosure(params.theta(), &x_den, 1e-13)?;
    Ok(rat_to_f64(&w) * e_num.mid / e_den.mid)
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
    fn rigorous_eval_basics() {
        // E(0, -1) = 0 exactly
        let e = deformed_exp_enclosure(&rat(0, 1), &rat(-1, 1), 1e-12).unwrap();
        assert!(e.mid.abs() <= e.rad);
        // E(1, x) = e^x
        for x in [-2i64, -1, 1] {
            let e = deformed_exp_enclosure(&rat(1, 1), &rat(x, 1), 1e-12).unwrap();
            assert!((e.mid - (x as f64).exp()).abs() < 1e-11);
            assert!(e.rad <= 1e-12);
        }
        assert!(deformed_exp_enclosure(&rat(3, 2), &rat(1, 1), 1e-12).is_err());
        assert!(deformed_exp_enclosure(&rat(1, 2), &rat(20_000, 1), 1e-12).is_err());
    }

    #[test]
    fn rigorous_eval_matches_long_partial_sum() {
        let (sum, _) = deformed_exp_partial(&rat(1, 2), &rat(-2, 1), 40);
        let e = deformed_exp_enclosure(&rat(1, 2), &rat(-2, 1), 1e-13).unwrap();
        assert!((e.mid - rat_to_f64(&sum)).abs() <= e.rad + 1e-13);
    }

    #[test]
    fn theta_zero_root_is_exact() {
        let r = find_exponent(&p(2, 1, 0, 1), 1e-12).unwrap();
        assert_eq!(r.kind, ExponentKind::RootOfE);
        let z0 = r.z0.unwrap();
        assert_eq!(z0.mid, 3.0);
        assert_eq!(z0.rad, 0.0);
        let lam = r.lambda.unwrap();
        assert!((lam.mid - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn white_and_zero_tail_trivial_rates() {
        let one = find_exponent(&p(0, 1, 0, 1), 1e-12).unwrap();
        assert_eq!(one.kind, ExponentKind::TrivialOne);
        assert_eq!(one.lambda.unwrap().mid, 1.0);
        // the origin is also a blue boundary point: C * 1^{n+2} = 1 = p_n
        assert_eq!(one.constant, Some(1.0));
        let zero = find_exponent(&p(-1, 2, 3, 1), 1e-12).unwrap();
        assert_eq!(zero.kind, ExponentKind::TrivialZero);
        let grey = find_exponent(&p(-1, 4, 2, 1), 1e-12).unwrap();
        assert_eq!(grey.kind, ExponentKind::Superexponential);
        let theta1 = find_exponent(&p(5, 1, 1, 1), 1e-12).unwrap();
        assert_eq!(theta1.kind, ExponentKind::Superexponential);
    }

    #[test]
    fn orange_quadratic_root() {
        // At (a, theta) = (-1/4, 1/2): z - z^2/9 = 1, smallest root (9 - sqrt(45))/2
        let r = find_exponent(&p(-1, 4, 1, 2), 1e-12).unwrap();
        assert_eq!(r.kind, ExponentKind::OrangePolynomial);
        let z0 = r.z0.unwrap();
        let expected = (9.0 - 45f64.sqrt()) / 2.0;
        assert!((z0.mid - expected).abs() < 1e-9, "z0 = {}", z0.mid);
        let lam = r.lambda.unwrap();
        assert!((lam.mid - 1.0 / expected).abs() < 1e-9);
    }

    #[test]
    fn blue_root_matches_table_ratio() {
        let params = p(0, 1, 1, 2);
        let r = find_exponent(&params, 1e-12).unwrap();
        assert_eq!(r.kind, ExponentKind::RootOfE);
        let lam = r.lambda.unwrap();
        let table = persistence_series(&params, 41).unwrap();
        let ratio = rat_to_f64(&(table.exact(41) / table.exact(40)));
        assert!(
            (ratio - lam.mid).abs() <= 1e-6 * lam.mid,
            "ratio {ratio} vs lambda {}",
            lam.mid
        );
    }

    #[test]
    fn enclosure_endpoints_have_opposite_signs() {
        // re-derive the bracket around the blue root and check rigor
        let params = p(1, 1, 1, 2);
        let r = find_exponent(&params, 1e-10).unwrap();
        let z0 = r.z0.unwrap();
        let theta = rat(1, 2);
        let inv_w = rat(1, 2);
        let lo = BigRational::from_float(z0.mid - z0.rad).unwrap();
        let hi = BigRational::from_float(z0.mid + z0.rad).unwrap();
        let s_lo = deformed_exp_sign(&theta, &(-(&lo * &inv_w)), 16).unwrap();
        let s_hi = deformed_exp_sign(&theta, &(-(&hi * &inv_w)), 16).unwrap();
        assert_eq!(s_lo, 1);
        assert_eq!(s_hi, -1);
    }

    #[test]
    fn duality_preserves_lambda() {
        for (orig, dual) in [
            (p(2, 1, 3, 1), p(1, 2, 1, 3)),
            (p(3, 1, -4, 1), p(3, 1, -1, 4)),
        ] {
            let a = find_exponent(&orig, 1e-12).unwrap();
            let b = find_exponent(&dual, 1e-12).unwrap();
            match (a.lambda, b.lambda) {
                (Some(la), Some(lb)) => {
                    assert!((la.mid - lb.mid).abs() <= 1e-9 * (1.0 + la.mid.abs()))
                }
                (None, None) => {}
                other => panic!("mismatched outcomes: {other:?}"),
            }
        }
    }

    #[test]
    fn blue_constant_normalizes_tail() {
        let params = p(0, 1, 1, 2);
        let r = find_exponent(&params, 1e-12).unwrap();
        let lam = r.lambda.unwrap();
        let c = r.constant.unwrap();
        let table = persistence_series(&params, 40).unwrap();
        let p40 = rat_to_f64(table.exact(40));
        let predicted = c * lam.mid.powi(42);
        assert!((p40 / predicted - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constant_outside_blue_is_domain_error() {
        let lam = Enclosure::exact(0.5);
        assert!(asymptotic_constant(&p(-1, 2, 2, 1), &lam).is_err());
    }

    #[test]
    fn yellow_equation_finds_rate() {
        let params = p(1, 4, -1, 2);
        let r = find_exponent(&params, 1e-12).unwrap();
        assert_eq!(r.kind, ExponentKind::YellowEquation);
        let lam = r.lambda.unwrap();
        let table = persistence_series(&params, 41).unwrap();
        let ratio = rat_to_f64(&(table.exact(41) / table.exact(40)));
        assert!((ratio - lam.mid).abs() <= 1e-6 * lam.mid);
    }
}
