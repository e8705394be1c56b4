//! Exact persistence probabilities of the MA(1) process with uniform
//! innovations.
//!
//! For i.i.d. innovations `X_i` uniform on `[-a, 1]` and a coupling
//! parameter `theta`, the persistence probability
//! `p_n = P(X_2 >= theta X_1, ..., X_{n+1} >= theta X_n)` is computed
//! exactly (arbitrary-precision rationals) across the whole parameter
//! half-plane `a > -1`:
//!
//! - [`phase`] classifies `(a, theta)` into phase-diagram regions and
//!   answers the closed-form trivial cases;
//! - [`series`] provides truncated formal power series over exact
//!   coefficient rings, including the deformed exponential
//!   `E(r, z) = sum r^(k(k-1)/2) z^k / k!`;
//! - [`regions`] holds the per-region generating functions, the closed
//!   forms, and the dispatcher producing a [`regions::PersistenceTable`];
//! - [`duality`] implements the parameter- and series-level dualities that
//!   reduce `|theta| > 1` to `|theta| <= 1`;
//! - [`combinatorics`] enumerates profiles, builds the reciprocal-series
//!   polynomials and the Mallows-Riordan polynomials, and gives the
//!   combinatorial representations of `p_n`;
//! - [`exponent`] finds the geometric decay rate `lambda` from the smallest
//!   positive denominator zero, with rigorous sign evaluation;
//! - [`oracle`] provides two independent ground truths: an exact
//!   piecewise-polynomial integrator and a reproducible Monte Carlo
//!   simulator.
//!
//! ```
//! use persist_ma1::{persistence_series, Params};
//! use persist_ma1::num_util::rat;
//!
//! // innovations uniform on [1/4, 1], coupling 1/2
//! let params = Params::new(rat(-1, 4), rat(1, 2)).unwrap();
//! let table = persistence_series(&params, 4).unwrap();
//! assert_eq!(table.exact(1), &rat(8, 9));
//! assert_eq!(table.exact(0), &rat(1, 1));
//! ```

pub mod coeff;
pub mod combinatorics;
pub mod duality;
pub mod error;
pub mod exponent;
pub mod num_util;
pub mod oracle;
pub mod params;
pub mod phase;
pub mod poly;
pub mod regions;
pub mod series;

pub use coeff::Coeff;
pub use error::{Error, Result};
pub use exponent::{find_exponent, ExponentKind, ExponentResult};
pub use params::{parse_rational, Params};
pub use phase::{classify, trivial_value, RegionAssignment, RegionTag};
pub use poly::Poly;
pub use regions::{persistence_series, Method, PersistenceTable};
pub use series::{deformed_exp_series, Series};
