//! One-sided polynomial pairs around the unit step on [-1, 1].
//!
//! The pair is produced by two small linear programs over a Chebyshev-spaced
//! grid (one per branch of the step), pushed strictly to one side by a
//! uniform safety slack, and then certified on an independent, much denser
//! grid. The certified integral of (upper - lower) is the pair's gap.

use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::polyfit;
use crate::quad::{quad_integrate, QuadConfig};
use crate::space::{weighted_norm_over, WeightedSpace};
use crate::{Error, Result, Side};

/// Domain slack accepted by [`step`] at the interval ends.
const STEP_DOMAIN_SLACK: f64 = 1e-9;
/// Default uniform slack for [`build_step_sandwich`].
pub const DEFAULT_SAFETY: f64 = 1e-6;
/// Certified margins may be this negative before a rebuild is forced.
const CERT_TOL: f64 = 1e-12;
/// How many times the safety slack is enlarged (x10) after a failed
/// certification.
const MAX_ATTEMPTS: usize = 3;

/// Unit step on [-1, 1]: zero up to and including the origin, one past it.
pub fn step(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-1.0 - STEP_DOMAIN_SLACK..=1.0 + STEP_DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!("step is defined on [-1, 1], got {x}")));
    }
    Ok(if x <= 0.0 { 0.0 } else { 1.0 })
}

/// Which of the two step conventions a pair brackets: the standard step, or
/// its reflection (one up to the origin, zero past it) used by the kernel
/// operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Standard,
    Reflected,
}

/// A certified polynomial sandwich `lower <= target <= upper` on [-1, 1].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichPair {
    lower: Polynomial,
    upper: Polynomial,
    degree: usize,
    orientation: Orientation,
    gap: f64,
    margin_grid: usize,
}

impl SandwichPair {
    pub fn lower(&self) -> &Polynomial {
        &self.lower
    }

    pub fn upper(&self) -> &Polynomial {
        &self.upper
    }

    /// The requested polynomial degree (the fallback constants report the
    /// degree they were asked for).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Certified integral of `upper - lower` over [-1, 1].
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Number of dense-grid nodes the one-sidedness was certified on.
    pub fn margin_grid(&self) -> usize {
        self.margin_grid
    }
}

/// Default certification density for a degree: `max(20k, 160)` nodes.
pub fn default_cert_nodes(degree: usize) -> usize {
    (20 * degree).max(160)
}

/// A priori bound `4 pi^2 / (k + 2)` on the achievable gap at degree `k`;
/// the certified LP gap always lands below it.
pub fn step_gap_bound(degree: usize) -> f64 {
    4.0 * std::f64::consts::PI.powi(2) / (degree as f64 + 2.0)
}

/// Chebyshev points of the second kind on `[a, b]`, endpoints included.
fn second_kind_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let u = -(std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * u
        })
        .collect()
}

/// Exact integrals of the Chebyshev basis over [-1, 1].
fn chebyshev_moments(degree: usize) -> Vec<f64> {
    (0..=degree)
        .map(|j| if j % 2 == 0 { 2.0 / (1.0 - (j * j) as f64) } else { 0.0 })
        .collect()
}

/// LP grid: second-kind points on each branch, the origin carried once.
fn constraint_grid(per_side: usize) -> Vec<f64> {
    let mut nodes = second_kind_grid(-1.0, 0.0, per_side);
    nodes.extend(second_kind_grid(0.0, 1.0, per_side).into_iter().skip(1));
    nodes
}

/// Worst signed margins (upper - step, step - lower) over a dense grid.
fn certify(lower: &Polynomial, upper: &Polynomial, nodes: &[f64]) -> Result<(f64, f64)> {
    let mut above = f64::INFINITY;
    let mut below = f64::INFINITY;
    for &x in nodes {
        let target = step(x)?;
        above = above.min(upper.eval(x)? - target);
        below = below.min(target - lower.eval(x)?);
    }
    Ok((below, above))
}

/// Builds a certified pair of degree-`degree` polynomials around the step.
///
/// `cert_nodes` controls both the LP grid (half per branch) and the
/// certification grid (ten times denser); it must be at least `20 * degree`.
/// `safety` is the uniform slack pushing the LP solutions strictly to one
/// side; each failed certification rescales it from the observed violation,
/// up to three tries. Degrees below two fall back to the constants pair
/// (0, 1).
pub fn build_step_sandwich(degree: usize, cert_nodes: usize, safety: f64) -> Result<SandwichPair> {
    if cert_nodes < 20 * degree {
        return Err(Error::InvalidArgument(format!(
            "cert_nodes = {cert_nodes} is below 20 * degree = {}",
            20 * degree
        )));
    }
    if !safety.is_finite() || safety < 0.0 {
        return Err(Error::InvalidArgument("safety must be finite and nonnegative".into()));
    }
    let domain = (-1.0, 1.0);
    let per_side = (cert_nodes / 2).max(degree + 2);
    let dense = {
        let mut nodes = second_kind_grid(-1.0, 0.0, 5 * cert_nodes);
        nodes.extend(second_kind_grid(0.0, 1.0, 5 * cert_nodes).into_iter().skip(1));
        nodes
    };

    if degree < 2 {
        let lower = Polynomial::constant(0.0, domain)?;
        let upper = Polynomial::constant(1.0, domain)?;
        let (below, above) = certify(&lower, &upper, &dense)?;
        debug_assert!(below >= 0.0 && above >= 0.0);
        let gap = quad_integrate(
            |x| upper.eval(x).unwrap_or(f64::NAN) - lower.eval(x).unwrap_or(f64::NAN),
            -1.0,
            1.0,
            &QuadConfig::default(),
        )?;
        return Ok(SandwichPair {
            lower,
            upper,
            degree,
            orientation: Orientation::Standard,
            gap,
            margin_grid: dense.len(),
        });
    }

    let nodes = constraint_grid(per_side);
    let moments = chebyshev_moments(degree);
    let mut slack = safety;
    let mut last_margin = f64::NEG_INFINITY;
    for _ in 0..MAX_ATTEMPTS {
        // Upper: at least the step everywhere; continuity forces the value
        // one at the origin, so the right-branch constraint is applied there.
        let upper_targets: Vec<f64> =
            nodes.iter().map(|&x| if x >= 0.0 { 1.0 + slack } else { slack }).collect();
        // Lower: at most the step, with the origin on the zero branch.
        let lower_targets: Vec<f64> =
            nodes.iter().map(|&x| if x > 0.0 { 1.0 - slack } else { -slack }).collect();
        let (upper, _) =
            polyfit::fit_one_sided(degree, domain, &nodes, &upper_targets, &moments, Side::Upper)?;
        let (lower, _) =
            polyfit::fit_one_sided(degree, domain, &nodes, &lower_targets, &moments, Side::Lower)?;
        let (below, above) = certify(&lower, &upper, &dense)?;
        let margin = below.min(above);
        last_margin = margin;
        if margin >= -CERT_TOL {
            let gap = quad_integrate(
                |x| upper.eval(x).unwrap_or(f64::NAN) - lower.eval(x).unwrap_or(f64::NAN),
                -1.0,
                1.0,
                &QuadConfig::default(),
            )?;
            return Ok(SandwichPair {
                lower,
                upper,
                degree,
                orientation: Orientation::Standard,
                gap,
                margin_grid: dense.len(),
            });
        }
        // The inter-node dip barely moves when the constraints shift, so a
        // slack of three times the observed total dip certifies next round.
        let dip = slack - margin;
        slack = (slack * 10.0).max(3.0 * dip).max(1e-6);
    }
    Err(Error::Certification(format!(
        "step sandwich of degree {degree} failed dense-grid certification (worst margin {last_margin:.3e})"
    )))
}

/// Swaps a standard pair to the reflected convention: the new pair brackets
/// `1 - step` and keeps the gap exactly.
pub fn reflect_pair(pair: &SandwichPair) -> Result<SandwichPair> {
    if pair.orientation != Orientation::Standard {
        return Err(Error::InvalidArgument("pair is already reflected".into()));
    }
    Ok(SandwichPair {
        lower: pair.upper.affine(-1.0, 1.0),
        upper: pair.lower.affine(-1.0, 1.0),
        degree: pair.degree,
        orientation: Orientation::Reflected,
        gap: pair.gap,
        margin_grid: pair.margin_grid,
    })
}

/// Weighted norm of `upper - lower` over the pair's interval; with p = 1 and
/// unit weight this recomputes the gap.
pub fn sandwich_gap(pair: &SandwichPair, space: &WeightedSpace) -> Result<f64> {
    let (a, b) = pair.lower.domain();
    weighted_norm_over(
        |x| {
            let hi = pair.upper.eval(x).unwrap_or(f64::NAN);
            let lo = pair.lower.eval(x).unwrap_or(f64::NAN);
            hi - lo
        },
        a,
        b,
        space,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_branches_as_printed() {
        assert_eq!(step(-0.5).unwrap(), 0.0);
        assert_eq!(step(0.0).unwrap(), 0.0);
        assert_eq!(step(0.5).unwrap(), 1.0);
        assert_eq!(step(-1.0).unwrap(), 0.0);
        assert_eq!(step(1.0).unwrap(), 1.0);
        assert!(step(1.2).is_err());
        assert!(step(f64::NAN).is_err());
    }

    #[test]
    fn low_degrees_fall_back_to_constants() {
        let pair = build_step_sandwich(0, 160, 1e-6).unwrap();
        assert_eq!(pair.lower().eval(0.3).unwrap(), 0.0);
        assert_eq!(pair.upper().eval(-0.7).unwrap(), 1.0);
        assert!((pair.gap() - 2.0).abs() < 1e-12);
        assert_eq!(pair.degree(), 0);
    }

    #[test]
    fn certified_pair_meets_the_gap_bound() {
        for degree in [2usize, 8, 16] {
            let pair =
                build_step_sandwich(degree, default_cert_nodes(degree), 1e-6).unwrap();
            assert!(
                pair.gap() <= step_gap_bound(degree),
                "degree {degree}: gap {} above bound {}",
                pair.gap(),
                step_gap_bound(degree)
            );
            assert!(pair.gap() >= 0.0);
        }
    }

    #[test]
    fn gap_is_nonincreasing_in_degree() {
        let coarse = build_step_sandwich(8, default_cert_nodes(8), 1e-6).unwrap();
        let fine = build_step_sandwich(16, default_cert_nodes(16), 1e-6).unwrap();
        assert!(fine.gap() <= coarse.gap() + 1e-10);
    }

    #[test]
    fn one_sidedness_holds_on_a_fresh_grid() {
        let pair = build_step_sandwich(6, default_cert_nodes(6), 1e-6).unwrap();
        for i in 0..=2000 {
            let x = -1.0 + 2.0 * i as f64 / 2000.0;
            let target = step(x).unwrap();
            assert!(pair.upper().eval(x).unwrap() >= target - 1e-9);
            assert!(pair.lower().eval(x).unwrap() <= target + 1e-9);
        }
    }

    #[test]
    fn reflection_preserves_the_gap_and_flips_the_target() {
        let pair = build_step_sandwich(8, default_cert_nodes(8), 1e-6).unwrap();
        let reflected = reflect_pair(&pair).unwrap();
        assert_eq!(reflected.orientation(), Orientation::Reflected);
        assert!((reflected.gap() - pair.gap()).abs() < 1e-14);
        for i in 0..=1000 {
            let x = -1.0 + 2.0 * i as f64 / 1000.0;
            let target = 1.0 - step(x).unwrap();
            assert!(reflected.upper().eval(x).unwrap() >= target - 1e-9);
            assert!(reflected.lower().eval(x).unwrap() <= target + 1e-9);
        }
        assert!(reflect_pair(&reflected).is_err());
    }

    #[test]
    fn gap_matches_independent_recomputations() {
        let pair = build_step_sandwich(10, default_cert_nodes(10), 1e-6).unwrap();
        let coeff_gap = pair.upper().sub(pair.lower()).unwrap().integral_over_domain();
        assert!((coeff_gap - pair.gap()).abs() < 1e-10);
        let space = WeightedSpace::unweighted(1.0, QuadConfig::default()).unwrap();
        let norm_gap = sandwich_gap(&pair, &space).unwrap();
        assert!((norm_gap - pair.gap()).abs() < 1e-10);
    }

    #[test]
    fn bad_arguments_are_rejected() {
        assert!(build_step_sandwich(8, 100, 1e-6).is_err());
        assert!(build_step_sandwich(8, 160, -1.0).is_err());
        assert!(build_step_sandwich(8, 160, f64::NAN).is_err());
    }
}
