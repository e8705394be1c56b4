//! Profile enumeration, the reciprocal-series polynomials phi_l, the
//! Mallows-Riordan polynomials, and the combinatorial representations of the
//! persistence probabilities built from them.

use std::sync::Mutex;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num_util::{choose2, factorial, rat_int, rat_pow, rat_pow_signed};
use crate::params::Params;
use crate::poly::Poly;
use crate::series::deformed_exp_series;

/// An l-profile: a multiplicity vector `(r_1, ..., r_l)` with
/// `sum i * r_i = l`. Equivalent to an integer partition of `l` where `r_i`
/// counts the parts equal to `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    r: Vec<u64>,
}

impl Profile {
    pub fn new(r: Vec<u64>) -> Result<Self> {
        let ell: u64 = r
            .iter()
            .enumerate()
            .map(|(i, &m)| (i as u64 + 1) * m)
            .sum();
        if ell != r.len() as u64 || r.is_empty() {
            return Err(Error::Domain(format!(
                "not a profile: multiplicities {r:?} weigh {ell}, expected {}",
                r.len()
            )));
        }
        Ok(Profile { r })
    }

    pub fn ell(&self) -> usize {
        self.r.len()
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.r
    }

    /// Number of nonzero entries counted with multiplicity, `sum r_i`.
    pub fn support(&self) -> u64 {
        self.r.iter().sum()
    }
}

/// All l-profiles in descending lexicographic order of the multiplicity
/// vector; there are as many as integer partitions of `l`.
pub fn enumerate_profiles(ell: usize) -> Vec<Profile> {
    assert!(ell >= 1);
    let mut out = Vec::new();
    let mut parts: Vec<u64> = Vec::new();
    gen_partitions(ell as u64, ell as u64, &mut parts, &mut out);
    let mut profiles: Vec<Profile> = out
        .into_iter()
        .map(|parts| {
            let mut r = vec![0u64; ell];
            for part in parts {
                r[part as usize - 1] += 1;
            }
            Profile { r }
        })
        .collect();
    profiles.sort_by(|a, b| b.r.cmp(&a.r));
    profiles
}

fn gen_partitions(n: u64, max: u64, parts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(parts.clone());
        return;
    }
    for p in (1..=max.min(n)).rev() {
        parts.push(p);
        gen_partitions(n - p, p, parts, out);
        parts.pop();
    }
}

/// The number of length-k nonnegative integer vectors with the given
/// profile: the multinomial `k! / (prod r_j! * (k - sum r_i)!)`, or 0 when
/// `k < sum r_i`.
pub fn profile_count(k: usize, profile: &Profile) -> BigUint {
    let support = profile.support();
    if (k as u64) < support {
        return BigUint::zero();
    }
    let mut denom = factorial((k as u64 - support) as usize);
    for &m in profile.multiplicities() {
        denom *= factorial(m as usize);
    }
    let num = factorial(k);
    (num / denom).to_biguint().expect("multinomial is positive")
}

/// Coefficient `l` of the reciprocal of the deformed exponential, as a
/// polynomial in theta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPolynomial {
    pub ell: usize,
    pub poly: Poly,
}

static PHI_CACHE: Mutex<Vec<Poly>> = Mutex::new(Vec::new());

/// `phi_l(theta) = sum over l-profiles of
/// (sum r_i; r_1,...,r_l) * prod (-theta^(i(i-1)/2)/i!)^(r_i)`.
/// Computed symbolically once and cached.
pub fn phi(ell: usize) -> PhiPolynomial {
    let mut cache = PHI_CACHE.lock().unwrap();
    while cache.len() <= ell {
        let l = cache.len();
        cache.push(if l == 0 { Poly::one() } else { phi_from_profiles(l) });
    }
    PhiPolynomial {
        ell,
        poly: cache[ell].clone(),
    }
}

fn phi_from_profiles(ell: usize) -> Poly {
    let mut acc = Poly::zero();
    for profile in enumerate_profiles(ell) {
        // multinomial (sum r_i; r_1, ..., r_l)
        let mut multinomial = factorial(profile.support() as usize);
        let mut exponent = 0u64;
        let mut factorial_pow = BigInt::one();
        for (i, &m) in profile.multiplicities().iter().enumerate() {
            let part = i as u64 + 1;
            multinomial /= factorial(m as usize);
            exponent += m * part * (part - 1) / 2;
            for _ in 0..m {
                factorial_pow *= factorial(part as usize);
            }
        }
        let sign = if profile.support() % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let coeff = BigRational::new(sign * multinomial, factorial_pow);
        acc = acc.add(&Poly::monomial(coeff, exponent as usize));
    }
    acc
}

/// Number of nonzero monomials of `phi_l`; equals the number of distinct
/// values of the sum of squared parts over the partitions of `l`
/// (OEIS A069999).
pub fn monomial_count(ell: usize) -> usize {
    phi(ell).poly.num_terms()
}

/// The n-th Mallows-Riordan polynomial `J_n(theta)`, defined through the
/// logarithm of the deformed exponential:
/// `log E(theta, z) = sum (theta-1)^(n-1) J_n(theta) z^n / n!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MallowsRiordan {
    pub n: usize,
    pub poly: Poly,
}

static J_CACHE: Mutex<Vec<Poly>> = Mutex::new(Vec::new());

pub fn mallows_riordan(n: usize) -> Result<MallowsRiordan> {
    assert!(n >= 1);
    let mut cache = J_CACHE.lock().unwrap();
    if cache.len() < n {
        let theta = Poly::monomial(BigRational::one(), 1);
        let log = deformed_exp_series(&theta, &Poly::one(), n).log()?;
        let theta_minus_one = Poly::from_coeffs(vec![rat_int(-1), rat_int(1)]);
        for m in cache.len() + 1..=n {
            let numerator = log
                .coeff(m)
                .scale(&BigRational::from_integer(factorial(m)));
            let poly = numerator
                .div_exact(&theta_minus_one.pow(m - 1))
                .ok_or(Error::InexactDivision)?;
            cache.push(poly);
        }
    }
    Ok(MallowsRiordan {
        n,
        poly: cache[n - 1].clone(),
    })
}

/// Blue-region combinatorial representation:
/// `p_n = (-1/(1+a))^{n+1} sum_{k=0}^{n+1} phi_{n+1-k}(theta)
///  theta^(k(k-1)/2) (-a)^k / k!`.
pub fn comb_pn_blue(params: &Params, n: usize) -> BigRational {
    let theta = params.theta();
    let neg_a = -params.a().clone();
    let mut sum = BigRational::zero();
    for k in 0..=(n + 1) {
        let term = phi(n + 1 - k).poly.eval(theta)
            * rat_pow(theta, choose2(k))
            * rat_pow(&neg_a, k as u64)
            / BigRational::from_integer(factorial(k));
        sum += term;
    }
    rat_pow(&(-params.one_plus_a().recip()), (n + 1) as u64) * sum
}

/// Duality-extended combinatorial representations with `tb = 1/theta`:
/// for `theta >= 1, a >= 0`,
/// `p_n = (1+a)^{-(n+1)} sum_k phi_{n+1-k}(tb) (-a)^{n+1-k} tb^(k(k-1)/2)/k!`;
/// for `theta < -1, -1/theta <= a <= -theta`,
/// `p_n = (-1/(1+a))^{n+1} sum_k phi_{n+1-k}(tb) tb^(k(k-1)/2) (-a)^k / k!`.
pub fn comb_pn_dual(params: &Params, n: usize) -> Result<BigRational> {
    let theta = params.theta();
    let a = params.a();
    let one = BigRational::one();
    let part_a = *theta >= one && !a.is_negative();
    let part_b = *theta < -&one && *a >= -theta.recip() && *a <= -theta.clone();
    if !part_a && !part_b {
        return Err(Error::Domain(format!(
            "dual combinatorial representation does not cover {params}"
        )));
    }
    let tb = theta.recip();
    let neg_a = -a.clone();
    let mut sum = BigRational::zero();
    for k in 0..=(n + 1) {
        let common = phi(n + 1 - k).poly.eval(&tb) * rat_pow(&tb, choose2(k))
            / BigRational::from_integer(factorial(k));
        let term = if part_a {
            common * rat_pow(&neg_a, (n + 1 - k) as u64)
        } else {
            common * rat_pow(&neg_a, k as u64)
        };
        sum += term;
    }
    let prefactor = if part_a {
        rat_pow(&params.one_plus_a().recip(), (n + 1) as u64)
    } else {
        rat_pow(&(-params.one_plus_a().recip()), (n + 1) as u64)
    };
    Ok(prefactor * sum)
}

/// Green-region combinatorial representation for `n >= 1`:
/// `p_n = (-1)^{n+1}/(1+a)^{n+1} sum_{k=0}^{n+1} theta^(k(k-3)/2)
///  phi_{n+1-k}(theta) / k!` (the exponents `k(k-3)/2` can be negative, so
/// the powers are evaluated as exact rationals). `p_0 = 1` by convention.
pub fn comb_pn_green(params: &Params, n: usize) -> Result<BigRational> {
    let theta = params.theta();
    if theta.is_zero() {
        return Err(Error::Domain(
            "green representation needs theta < 0".into(),
        ));
    }
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut sum = BigRational::zero();
    for k in 0..=(n + 1) {
        let e = (k as i64) * (k as i64 - 3) / 2;
        let term = rat_pow_signed(theta, e) * phi(n + 1 - k).poly.eval(theta)
            / BigRational::from_integer(factorial(k));
        sum += term;
    }
    Ok(rat_pow(&(-params.one_plus_a().recip()), (n + 1) as u64) * sum)
}
