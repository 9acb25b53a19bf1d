//! One-sided polynomial approximation of weighted-integrable functions on `[0, 1]`.
//!
//! This crate builds *pairs* of algebraic polynomials that enclose a target
//! function from below and above, with the enclosure gap controlled by the
//! averaged modulus of smoothness (the tau-modulus) of the target. Unbounded
//! targets are supported through weighted norms: a function is measured as
//! `(∫ |f(x)/β(x)|^p dx)^(1/p)` for a weight `β` that absorbs endpoint blow-up.
//!
//! The construction runs in stages, each usable on its own:
//!
//! 1. [`moduli`] — finite differences, the local modulus of smoothness over
//!    shrinking windows, and its weighted average, the tau-modulus.
//! 2. [`sandwich`] — certified one-sided polynomial enclosures of the unit
//!    step on `[-1, 1]`, built by linear programming and re-verified on an
//!    independent dense grid.
//! 3. [`operators`] — kernel operators that integrate the step enclosure
//!    against the positive and negative parts of a derivative, plus averaging
//!    smoothers that tame non-smooth targets; composing the two yields
//!    degree-`k` minorant/majorant polynomials for any integrable target.
//! 4. [`oracle`] — an independent linear-programming oracle for the best
//!    one-sided and two-sided approximation errors on a grid, used to audit
//!    the constructive pipeline.
//! 5. [`verify`] — a reporting harness that re-checks every enclosure and
//!    error bound on dense grids and emits CSV/JSON reports.
//!
//! # Quick start
//!
//! ```
//! use onesided::{FunctionModel, WeightedSpace, QuadConfig};
//! use onesided::moduli::{ModulusConfig, averaged_modulus};
//!
//! // tau_1(x, 0.2) in unweighted L_1 equals 0.2 - 0.2^2/4 = 0.19.
//! let identity = FunctionModel::new("identity", |x| x);
//! let space = WeightedSpace::unweighted(1.0, QuadConfig::default()).unwrap();
//! let tau = averaged_modulus(&identity, 0.2, &ModulusConfig::new(1), &space).unwrap();
//! assert!((tau - 0.19).abs() < 5e-3);
//! ```
//!
//! ```
//! use onesided::sandwich::build_step_sandwich;
//!
//! // A certified degree-8 enclosure of the unit step on [-1, 1].
//! let pair = build_step_sandwich(8, 160, 1e-6).unwrap();
//! assert!(pair.gap() <= 4.0 * std::f64::consts::PI.powi(2) / 10.0);
//! ```

mod error;
mod polyfit;
mod simplex;

pub mod guide;
pub mod moduli;
pub mod operators;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod sandwich;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{BasisKind, Polynomial};
pub use quad::{quad_integrate, QuadConfig, QuadRule};
pub use sandwich::{build_step_sandwich, SandwichPair};
pub use space::{weighted_norm, FunctionModel, WeightedSpace};

/// Which side of an enclosure an object lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Lower,
    Upper,
}
