//! Phase-diagram classification of a parameter pair and the closed-form
//! trivial cases (all-ones tail, zero tail, and the 1/(n+1)! law).

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::Result;
use crate::num_util::{factorial, rat_int};
use crate::params::Params;

/// Tags for the regions of the parameter half-plane `a > -1`.
///
/// `DualFlip` marks parameters where the sign-flipped Moebius transform of
/// the generating function applies (`theta < 0`, `a > 0`); it is never the
/// canonical tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionTag {
    WhiteOne,
    ZeroTail,
    ThetaOne,
    Blue,
    Green,
    Yellow,
    Orange,
    GreyPiecewise,
    DualPositive,
    DualNegative,
    DualFlip,
}

impl RegionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionTag::WhiteOne => "WhiteOne",
            RegionTag::ZeroTail => "ZeroTail",
            RegionTag::ThetaOne => "ThetaOne",
            RegionTag::Blue => "Blue",
            RegionTag::Green => "Green",
            RegionTag::Yellow => "Yellow",
            RegionTag::Orange => "Orange",
            RegionTag::GreyPiecewise => "GreyPiecewise",
            RegionTag::DualPositive => "DualPositive",
            RegionTag::DualNegative => "DualNegative",
            RegionTag::DualFlip => "DualFlip",
        }
    }
}

impl std::fmt::Display for RegionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every region tag whose defining inequalities hold, the canonical tag
/// chosen by fixed priority, and (for duality tags) the parameter pair the
/// computation is forwarded to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionAssignment {
    pub applicable: Vec<RegionTag>,
    pub canonical: RegionTag,
    pub dual_target: Option<Params>,
}

/// Classify `(a, theta)` into phase-diagram regions. The applicable set is
/// never empty; overlapping formulas agree wherever they overlap.
pub fn classify(params: &Params) -> RegionAssignment {
    let a = params.a();
    let theta = params.theta();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let neg_one = rat_int(-1);
    let neg_a = -a.clone();
    let neg_theta = -theta.clone();

    let mut applicable = Vec::new();

    // All-ones region: a in (-1, 0] and theta <= -a (covers all theta <= 0).
    if *a <= zero && *theta <= neg_a {
        applicable.push(RegionTag::WhiteOne);
    }
    // Zero tail: a in (-1, 0) and theta >= -1/a.
    if a.is_negative() && *theta >= -a.recip() {
        applicable.push(RegionTag::ZeroTail);
    }
    if theta.is_one() {
        applicable.push(RegionTag::ThetaOne);
    }
    // Blue: theta in [0,1] with a >= 0, or theta in [-1,0) with -theta <= a <= -1/theta.
    let blue = (!theta.is_negative() && *theta <= one && !a.is_negative())
        || (theta.is_negative()
            && *theta >= neg_one
            && *a >= neg_theta
            && *a <= -theta.recip());
    if blue {
        applicable.push(RegionTag::Blue);
    }
    // Green: theta in [-1,0) with a >= -1/theta.
    if theta.is_negative() && *theta >= neg_one && *a >= -theta.recip() {
        applicable.push(RegionTag::Green);
    }
    // Yellow: theta in [-1,0] with 0 <= a <= -theta.
    if *theta <= zero && *theta >= neg_one && !a.is_negative() && *a <= neg_theta {
        applicable.push(RegionTag::Yellow);
    }
    // Orange: theta in (0,1] with -theta <= a <= 0.
    if theta.is_positive() && *theta <= one && *a >= neg_theta && *a <= zero {
        applicable.push(RegionTag::Orange);
    }
    // Grey piecewise closed form: a in (-1,0] and 1 <= theta <= -1/a
    // (the upper bound is +infinity at a = 0).
    if *a <= zero && *theta >= one && (a.is_zero() || *theta <= -a.recip()) {
        applicable.push(RegionTag::GreyPiecewise);
    }
    if *theta > one && a.is_positive() {
        applicable.push(RegionTag::DualPositive);
    }
    if *theta < neg_one && a.is_positive() {
        applicable.push(RegionTag::DualNegative);
    }
    // Generating-function flip (never canonical).
    if theta.is_negative() && a.is_positive() {
        applicable.push(RegionTag::DualFlip);
    }

    // The tags above are pushed in priority order already.
    let canonical = *applicable
        .iter()
        .find(|t| !matches!(t, RegionTag::DualFlip))
        .expect("classification gap: no region applies");

    let dual_target = match canonical {
        RegionTag::DualPositive => {
            Some(Params::new(a.recip(), theta.recip()).expect("dual of a > 0 is valid"))
        }
        RegionTag::DualNegative => {
            Some(Params::new(a.clone(), theta.recip()).expect("dual keeps a"))
        }
        _ => None,
    };

    RegionAssignment {
        applicable,
        canonical,
        dual_target,
    }
}

/// Closed-form persistence probability when a trivial rule applies:
/// 1 in the all-ones region, 0 (for `n >= 1`) in the zero-tail region, and
/// `1/(n+1)!` on the line `theta = 1`. Returns `None` when no rule applies.
/// Overlapping rules are checked for agreement.
pub fn trivial_value(params: &Params, n: usize) -> Option<BigRational> {
    let assignment = classify(params);
    let mut candidates: Vec<BigRational> = Vec::new();
    if assignment.applicable.contains(&RegionTag::WhiteOne) {
        candidates.push(BigRational::one());
    }
    if assignment.applicable.contains(&RegionTag::ZeroTail) {
        candidates.push(if n == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    if assignment.applicable.contains(&RegionTag::ThetaOne) {
        candidates.push(BigRational::new(1.into(), factorial(n + 1)));
    }
    let first = candidates.first()?.clone();
    assert!(
        candidates.iter().all(|c| *c == first),
        "overlapping trivial rules disagree at {params}, n = {n}"
    );
    Some(first)
}

/// Convenience used by tests and the verifier: classify and resolve one
/// duality hop, returning the parameters whose region formula is evaluated.
pub fn resolve_duality(params: &Params) -> Result<(Params, RegionAssignment)> {
    let assignment = classify(params);
    match &assignment.dual_target {
        Some(target) => {
            let inner = classify(target);
            debug_assert!(!matches!(
                inner.canonical,
                RegionTag::DualPositive | RegionTag::DualNegative
            ));
            Ok((target.clone(), inner))
        }
        None => Ok((params.clone(), assignment)),
    }
}
