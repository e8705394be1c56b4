//! Ground-truth oracles: an exact piecewise-polynomial integrator for the
//! iterated persistence integral, and a seeded counter-based Monte Carlo
//! simulator. Both are independent of the generating-function machinery.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num_util::rat_to_f64;
use crate::params::Params;
use crate::poly::Poly;

/// Default cap on the recursion depth of the exact integrator; the number of
/// polynomial pieces grows with n.
pub const DEFAULT_DP_CAP: usize = 10;

/// A piecewise polynomial on `[-a, 1]`: strictly increasing breakpoints with
/// one exact-rational polynomial per interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<BigRational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    /// A single constant piece on `[lo, hi]`.
    pub fn constant_on(lo: BigRational, hi: BigRational, value: BigRational) -> Self {
        assert!(lo < hi);
        PiecewisePoly {
            breakpoints: vec![lo, hi],
            pieces: vec![Poly::constant(value)],
        }
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn domain(&self) -> (&BigRational, &BigRational) {
        (
            self.breakpoints.first().unwrap(),
            self.breakpoints.last().unwrap(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let (lo, hi) = self.domain();
        assert!(x >= lo && x <= hi, "evaluation outside the domain");
        let idx = match self.breakpoints.iter().position(|b| x < b) {
            Some(i) => i - 1,
            None => self.pieces.len() - 1,
        };
        self.pieces[idx].eval(x)
    }

    /// The continuous antiderivative `A(t) = integral from the left endpoint
    /// to t`, plus the total mass `A(right endpoint)`.
    pub fn antiderivative(&self) -> (PiecewisePoly, BigRational) {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut acc = BigRational::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let prim = p.integral();
            let shift = &acc - prim.eval(&self.breakpoints[i]);
            let adjusted = prim.add(&Poly::constant(shift));
            acc = adjusted.eval(&self.breakpoints[i + 1]);
            pieces.push(adjusted);
        }
        (
            PiecewisePoly {
                breakpoints: self.breakpoints.clone(),
                pieces,
            },
            acc,
        )
    }

    /// Total integral over the domain.
    pub fn mass(&self) -> BigRational {
        self.antiderivative().1
    }

    fn merge_equal_neighbours(mut self) -> Self {
        let mut i = 0;
        while i + 1 < self.pieces.len() {
            if self.pieces[i] == self.pieces[i + 1] {
                self.pieces.remove(i + 1);
                self.breakpoints.remove(i + 1);
            } else {
                i += 1;
            }
        }
        self
    }
}

/// One step of the density recursion: from the sub-probability density of
/// `(X_1..X_k all constraints hold, X_k = x)` to the same object for `k+1`.
/// The new density at y integrates the old one over `{x : theta*x <= y}` and
/// divides by `1 + a`.
fn dp_step(f: &PiecewisePoly, params: &Params) -> PiecewisePoly {
    let theta = params.theta();
    let lo = -params.a().clone();
    let hi = BigRational::one();
    let inv_width = params.one_plus_a().recip();
    let (anti, mass) = f.antiderivative();

    let mut cuts: Vec<BigRational> = vec![lo.clone(), hi.clone()];
    if !theta.is_zero() {
        for t in anti.breakpoints() {
            let y = theta * t;
            if y > lo && y < hi {
                cuts.push(y);
            }
        }
    } else if lo.is_negative() {
        cuts.push(BigRational::zero());
    }
    cuts.sort();
    cuts.dedup();

    let inv_theta = if theta.is_zero() {
        BigRational::zero()
    } else {
        theta.recip()
    };
    let mut pieces = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / BigRational::from_integer(2.into());
        let integral_piece = if theta.is_zero() {
            // S(y) is the whole interval iff y >= 0, otherwise empty.
            if mid.is_negative() {
                Poly::zero()
            } else {
                Poly::constant(mass.clone())
            }
        } else {
            let u = &mid * &inv_theta;
            let below = u <= lo;
            let above = u >= hi;
            let composed = if below {
                Poly::zero()
            } else if above {
                Poly::constant(anti.eval(&hi))
            } else {
                let idx = match anti.breakpoints().iter().position(|b| &u < b) {
                    Some(i) => i - 1,
                    None => anti.pieces().len() - 1,
                };
                anti.pieces()[idx].compose_scale(&inv_theta)
            };
            if theta.is_positive() {
                // S(y) = [-a, min(1, y/theta)]
                composed
            } else {
                // S(y) = [max(-a, y/theta), 1]
                Poly::constant(mass.clone()).sub(&composed)
            }
        };
        pieces.push(integral_piece.scale(&inv_width));
    }

    let next = PiecewisePoly {
        breakpoints: cuts,
        pieces,
    }
    .merge_equal_neighbours();
    debug_assert!(next.breakpoints().windows(2).all(|w| w[0] < w[1]));
    next
}

/// The density of step `n+1` (so its mass is exactly `p_n`), capped because
/// the piece count grows with n.
pub fn dp_density_capped(params: &Params, n: usize, cap: usize) -> Result<PiecewisePoly> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let lo = -params.a().clone();
    let mut f = PiecewisePoly::constant_on(lo, BigRational::one(), params.one_plus_a().recip());
    for _ in 0..n {
        f = dp_step(&f, params);
    }
    Ok(f)
}

/// Exact persistence probability by iterated piecewise-polynomial
/// integration, with the default cap.
pub fn dp_exact_pn(params: &Params, n: usize) -> Result<BigRational> {
    dp_exact_pn_capped(params, n, DEFAULT_DP_CAP)
}

/// As [`dp_exact_pn`] with an explicit recursion cap.
pub fn dp_exact_pn_capped(params: &Params, n: usize, cap: usize) -> Result<BigRational> {
    Ok(dp_density_capped(params, n, cap)?.mass())
}

/// A frequency estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

// SplitMix64 finalizer; the statistical workhorse of the counter-based
// generator below.
fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

fn stream_base(seed: u64, sample: u64) -> u64 {
    mix64(mix64(seed ^ 0x6A09_E667_F3BC_C909).wrapping_add(sample.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Uniform in [0,1) addressed purely by (stream, coordinate); no sequential
/// state, so serial and parallel sweeps produce identical draws.
fn uniform01(base: u64, coord: u64) -> f64 {
    let bits = mix64(base.wrapping_add(coord.wrapping_mul(0xD1B5_4A32_D192_ED03)));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Monte Carlo estimate of `p_n`. Deterministic for a fixed `(seed, samples)`
/// pair: every innovation is a pure function of (seed, sample index,
/// coordinate index).
pub fn mc_estimate(params: &Params, n: usize, samples: u64, seed: u64) -> McEstimate {
    assert!(samples >= 1);
    let a = rat_to_f64(params.a());
    let theta = rat_to_f64(params.theta());
    let width = 1.0 + a;
    let mut hits: u64 = 0;
    for i in 0..samples {
        let base = stream_base(seed, i);
        let mut prev = uniform01(base, 0) * width - a;
        let mut ok = true;
        for j in 1..=n {
            let x = uniform01(base, j as u64) * width - a;
            if x < theta * prev {
                ok = false;
                break;
            }
            prev = x;
        }
        if ok {
            hits += 1;
        }
    }
    let mean = hits as f64 / samples as f64;
    let stderr = (mean * (1.0 - mean) / samples as f64).sqrt();
    McEstimate {
        mean,
        stderr,
        samples,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num_util::rat;

    fn p(an: i64, ad: i64, tn: i64, td: i64) -> Params {
        Params::from_ints(an, ad, tn, td).unwrap()
    }

    #[test]
    fn p0_is_one_everywhere() {
        for params in [p(1, 4, -1, 2), p(3, 1, 5, 2), p(-1, 2, 0, 1)] {
            assert_eq!(dp_exact_pn(&params, 0).unwrap(), rat(1, 1));
        }
    }

    #[test]
    fn hand_integrated_values() {
        assert_eq!(dp_exact_pn(&p(1, 4, -1, 2), 1).unwrap(), rat(91, 100));
        assert_eq!(dp_exact_pn(&p(-1, 4, 2, 1), 1).unwrap(), rat(1, 9));
        assert_eq!(dp_exact_pn(&p(-1, 4, 2, 1), 2).unwrap(), rat(0, 1));
        assert_eq!(dp_exact_pn(&p(2, 1, -1, 2), 1).unwrap(), rat(1, 4));
        assert_eq!(dp_exact_pn(&p(-1, 4, 1, 2), 1).unwrap(), rat(8, 9));
    }

    #[test]
    fn theta_one_law() {
        assert_eq!(dp_exact_pn(&p(1, 1, 1, 1), 4).unwrap(), rat(1, 120));
        assert_eq!(dp_exact_pn(&p(-1, 2, 1, 1), 3).unwrap(), rat(1, 24));
    }

    #[test]
    fn theta_zero_independence() {
        // p_n = (1+a)^{-n} for theta = 0, a >= 0
        assert_eq!(dp_exact_pn(&p(2, 1, 0, 1), 4).unwrap(), rat(1, 81));
    }

    #[test]
    fn mass_nonincreasing_and_densities_nonnegative() {
        for params in [p(1, 4, -1, 2), p(0, 1, 1, 2), p(-1, 4, 1, 2), p(2, 1, -1, 3)] {
            let mut prev = rat(2, 1);
            for n in 0..=6 {
                let f = dp_density_capped(&params, n, 10).unwrap();
                let m = f.mass();
                assert!(m <= prev, "mass increased at {params}, n = {n}");
                for (w, piece) in f.breakpoints().windows(2).zip(f.pieces()) {
                    let mid = (&w[0] + &w[1]) / rat(2, 1);
                    assert!(piece.eval(&mid) >= rat(0, 1));
                }
                prev = m;
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            dp_exact_pn_capped(&p(1, 1, 1, 2), 11, 10),
            Err(Error::CapExceeded { n: 11, cap: 10 })
        );
        assert!(dp_exact_pn_capped(&p(1, 1, 1, 2), 11, 12).is_ok());
    }

    #[test]
    fn mc_is_bit_deterministic() {
        let params = p(1, 1, 1, 2);
        let e1 = mc_estimate(&params, 3, 20_000, 42);
        let e2 = mc_estimate(&params, 3, 20_000, 42);
        assert_eq!(e1, e2);
        let e3 = mc_estimate(&params, 3, 20_000, 43);
        assert_ne!(e1.mean, e3.mean);
    }

    #[test]
    fn mc_zero_tail_is_exactly_zero() {
        let e = mc_estimate(&p(-1, 2, 2, 1), 3, 50_000, 7);
        assert_eq!(e.mean, 0.0);
    }

    #[test]
    fn mc_symmetric_case_near_half() {
        let e = mc_estimate(&p(1, 1, 1, 2), 1, 1_000_000, 1);
        assert!((e.mean - 0.5).abs() <= 4.0 * e.stderr);
    }
}
