//! Finite differences and moduli of smoothness.
//!
//! The local modulus at `x` is the largest k-th finite difference whose
//! sample points all stay inside a window of width `k * delta` centered at
//! `x` (clipped to `[0, 1]`). Its weighted average over the interval is the
//! tau-modulus, the smoothness gauge the whole crate is calibrated against:
//! unlike the uniform modulus it stays finite and tends to zero with `delta`
//! even for discontinuous or weight-dominated unbounded targets.

use crate::space::{weighted_norm, FunctionModel, WeightedSpace};
use crate::{Error, Result};

/// Order and sampling density for the discretized sup in [`local_modulus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ModulusConfig {
    /// Difference order, at least 1.
    pub order: usize,
    /// Anchor points sampled across a window (at least 3, default 33).
    pub window_samples: usize,
    /// Step sizes sampled per anchor (at least 3, default 33).
    pub step_samples: usize,
}

impl ModulusConfig {
    pub fn new(order: usize) -> Self {
        Self { order, window_samples: 33, step_samples: 33 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidArgument("difference order must be at least 1".into()));
        }
        if self.window_samples < 3 || self.step_samples < 3 {
            return Err(Error::InvalidArgument(
                "modulus grids need at least 3 samples per axis".into(),
            ));
        }
        Ok(())
    }
}

/// `C(k, 0..=k)` as floats; exact in f64 for the degrees used here.
fn binomials(k: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(k + 1);
    let mut c = 1.0;
    row.push(c);
    for r in 0..k {
        c = c * (k - r) as f64 / (r + 1) as f64;
        row.push(c);
    }
    row
}

/// The k-th forward difference with step `h`, anchored at `x`:
/// the alternating binomial sum of `model` over `x, x+h, ..., x+k*h`.
///
/// Every sample point must lie in `[0, 1]`.
pub fn finite_difference(model: &FunctionModel, x: f64, h: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("difference order must be at least 1".into()));
    }
    if !x.is_finite() || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite difference request ({x}, {h})")));
    }
    const SLACK: f64 = 1e-12;
    let binom = binomials(k);
    let mut acc = 0.0;
    for (r, b) in binom.iter().enumerate() {
        let s = x + r as f64 * h;
        if !(-SLACK..=1.0 + SLACK).contains(&s) {
            return Err(Error::Domain(format!("sample point {s} outside [0, 1]")));
        }
        let sign = if (r + k).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * b * model.eval(s.clamp(0.0, 1.0));
    }
    Ok(acc)
}

/// Discretized sup of |k-th difference| over anchors `t` and steps `h` with
/// `t` and `t + k*h` inside `[x - k*delta/2, x + k*delta/2] ∩ [0, 1]`.
///
/// The anchor grid includes both window endpoints, so the sup is exact for
/// monotone targets; in general it underestimates by the grid resolution.
pub fn local_modulus(
    model: &FunctionModel,
    x: f64,
    delta: f64,
    cfg: &ModulusConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("window width delta must be positive, got {delta}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(local_modulus_at(model, x, delta, cfg))
}

/// Infallible kernel of [`local_modulus`]; preconditions already checked.
pub(crate) fn local_modulus_at(
    model: &FunctionModel,
    x: f64,
    delta: f64,
    cfg: &ModulusConfig,
) -> f64 {
    let k = cfg.order;
    let halfwidth = 0.5 * k as f64 * delta;
    let lo = (x - halfwidth).max(0.0);
    let hi = (x + halfwidth).min(1.0);
    if hi <= lo {
        return 0.0;
    }
    let binom = binomials(k);
    let mut best = 0.0_f64;
    let anchors = cfg.window_samples;
    for i in 0..anchors {
        let t = lo + (hi - lo) * i as f64 / (anchors - 1) as f64;
        let h_max = (hi - t) / k as f64;
        if h_max <= 0.0 {
            continue;
        }
        // h = 0 contributes nothing; start at the first positive step.
        for j in 1..cfg.step_samples {
            let h = h_max * j as f64 / (cfg.step_samples - 1) as f64;
            let mut acc = 0.0;
            for (r, b) in binom.iter().enumerate() {
                // min() guards the roundoff tail of t + k*h against hi.
                let s = (t + r as f64 * h).min(hi);
                let sign = if (r + k).is_multiple_of(2) { 1.0 } else { -1.0 };
                acc += sign * b * model.eval(s);
            }
            best = best.max(acc.abs());
        }
    }
    best
}

/// The tau-modulus: the weighted norm of `x -> local_modulus(model, x, delta)`.
pub fn averaged_modulus(
    model: &FunctionModel,
    delta: f64,
    cfg: &ModulusConfig,
    space: &WeightedSpace,
) -> Result<f64> {
    cfg.validate()?;
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("window width delta must be positive, got {delta}")));
    }
    weighted_norm(|x| local_modulus_at(model, x, delta, cfg), space)
}

/// Number of cells in a [`ModulusTable`] (values are stored at cell edges).
pub(crate) const TABLE_CELLS: usize = 2048;

/// The local modulus precomputed on a uniform grid over `[0, 1]`, with
/// linear interpolation in between.
///
/// Smoothing operators evaluate the modulus at millions of points; each
/// direct evaluation costs a full window scan, so they read this table
/// instead. The grid is fine enough that the interpolation error is far
/// below the enclosure margins the operators rely on.
#[derive(Debug, Clone)]
pub struct ModulusTable {
    values: Vec<f64>,
    delta: f64,
}

impl ModulusTable {
    pub fn build(model: &FunctionModel, delta: f64, cfg: &ModulusConfig) -> Result<Self> {
        cfg.validate()?;
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::InvalidArgument(format!("window width delta must be positive, got {delta}")));
        }
        let n = TABLE_CELLS + 1;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let x = i as f64 / TABLE_CELLS as f64;
            let v = local_modulus_at(model, x, delta, cfg);
            if !v.is_finite() {
                return Err(Error::NonFinite { x });
            }
            values.push(v);
        }
        Ok(Self { values, delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Linear interpolation; requests outside `[0, 1]` clamp to the edges.
    pub fn eval(&self, x: f64) -> f64 {
        let pos = (x.clamp(0.0, 1.0)) * TABLE_CELLS as f64;
        let i = (pos.floor() as usize).min(TABLE_CELLS - 1);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadConfig;

    fn identity() -> FunctionModel {
        FunctionModel::new("identity", |x| x)
    }

    fn unit_space() -> WeightedSpace {
        WeightedSpace::unweighted(1.0, QuadConfig::default()).unwrap()
    }

    #[test]
    fn first_difference_of_identity_is_the_step() {
        let d = finite_difference(&identity(), 0.3, 0.05, 1).unwrap();
        assert!((d - 0.05).abs() < 1e-15);
    }

    #[test]
    fn second_difference_of_square() {
        let sq = FunctionModel::new("square", |x| x * x);
        let d = finite_difference(&sq, 0.2, 0.1, 2).unwrap();
        assert!((d - 0.02).abs() < 1e-14, "got {d}");
    }

    #[test]
    fn third_difference_annihilates_quadratics() {
        let q = FunctionModel::new("quadratic", |x| 1.5 - 2.0 * x + 0.75 * x * x);
        let d = finite_difference(&q, 0.1, 0.2, 3).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn difference_outside_domain_is_rejected() {
        assert!(matches!(
            finite_difference(&identity(), 0.9, 0.2, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            finite_difference(&identity(), 0.5, 0.5, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constant_has_zero_local_modulus() {
        let c = FunctionModel::new("constant", |_| 4.25);
        let w = local_modulus(&c, 0.5, 0.2, &ModulusConfig::new(1)).unwrap();
        assert!(w.abs() < 1e-12);
    }

    #[test]
    fn identity_local_modulus_is_the_window_width() {
        let w = local_modulus(&identity(), 0.5, 0.1, &ModulusConfig::new(1)).unwrap();
        assert!((w - 0.1).abs() < 2e-3, "got {w}");
    }

    #[test]
    fn jump_inside_window_dominates() {
        let jump = FunctionModel::new("jump", |x| if x < 0.5 { 0.0 } else { 1.0 });
        let w = local_modulus(&jump, 0.5, 0.1, &ModulusConfig::new(1)).unwrap();
        assert!((w - 1.0).abs() < 1e-12, "got {w}");
    }

    #[test]
    fn tau_of_identity_matches_piecewise_integration() {
        // Interior windows give delta, boundary windows truncate linearly:
        // the integral is delta - delta^2/4.
        let cfg = ModulusConfig::new(1);
        let space = unit_space();
        for &delta in &[0.05, 0.1, 0.2] {
            let tau = averaged_modulus(&identity(), delta, &cfg, &space).unwrap();
            let exact = delta - delta * delta / 4.0;
            assert!((tau - exact).abs() < 5e-3, "delta={delta}: {tau} vs {exact}");
        }
    }

    #[test]
    fn tau_is_homogeneous() {
        let cfg = ModulusConfig::new(1);
        let space = unit_space();
        let doubled = FunctionModel::new("double", |x| 2.0 * x);
        let a = averaged_modulus(&doubled, 0.1, &cfg, &space).unwrap();
        let b = averaged_modulus(&identity(), 0.1, &cfg, &space).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn tau_is_monotone_in_delta() {
        let cfg = ModulusConfig::new(1);
        let space = unit_space();
        let kinked = FunctionModel::new("kinked", |x: f64| (x - 0.3).abs());
        let mut last = 0.0;
        for &delta in &[0.05, 0.1, 0.2] {
            let tau = averaged_modulus(&kinked, delta, &cfg, &space).unwrap();
            assert!(tau + 1e-10 >= last, "tau({delta}) = {tau} < {last}");
            last = tau;
        }
    }

    #[test]
    fn tau_vanishes_below_the_difference_order() {
        let line = FunctionModel::new("line", |x| 3.0 - 0.5 * x);
        let tau = averaged_modulus(&line, 0.2, &ModulusConfig::new(2), &unit_space()).unwrap();
        assert!(tau <= 1e-8, "got {tau}");
    }

    #[test]
    fn sup_dominates_lattice_samples() {
        let cfg = ModulusConfig::new(2);
        let wavy = FunctionModel::new("wavy", |x: f64| (7.0 * x).sin() + 0.3 * x);
        let (x, delta) = (0.4, 0.15);
        let w = local_modulus(&wavy, x, delta, &cfg).unwrap();
        let lo: f64 = (x - delta).max(0.0);
        let hi: f64 = (x + delta).min(1.0);
        for i in 0..cfg.window_samples {
            let t = lo + (hi - lo) * i as f64 / (cfg.window_samples - 1) as f64;
            let h_max = (hi - t) / 2.0;
            for j in 0..cfg.step_samples {
                let h = h_max * j as f64 / (cfg.step_samples - 1) as f64;
                if h <= 0.0 {
                    continue;
                }
                let d = finite_difference(&wavy, t, h, 2).unwrap().abs();
                assert!(w + 1e-12 >= d, "sup {w} < sample {d} at (t={t}, h={h})");
            }
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let cfg = ModulusConfig::new(1);
        let model = FunctionModel::new("sin3", |x| (3.0 * x).sin());
        let table = ModulusTable::build(&model, 0.1, &cfg).unwrap();
        for &x in &[0.0, 0.25, 0.5, 1.0] {
            let direct = local_modulus(&model, x, 0.1, &cfg).unwrap();
            assert!((table.eval(x) - direct).abs() < 1e-12, "grid point x={x}");
        }
        // Between grid points the interpolation stays within the local wiggle.
        let direct = local_modulus(&model, 0.3001, 0.1, &cfg).unwrap();
        assert!((table.eval(0.3001) - direct).abs() < 1e-3);
    }

    #[test]
    fn bad_arguments_are_rejected() {
        assert!(local_modulus(&identity(), 0.5, 0.0, &ModulusConfig::new(1)).is_err());
        assert!(local_modulus(&identity(), 1.5, 0.1, &ModulusConfig::new(1)).is_err());
        assert!(averaged_modulus(&identity(), -0.1, &ModulusConfig::new(1), &unit_space()).is_err());
        let bad = ModulusConfig { order: 1, window_samples: 2, step_samples: 33 };
        assert!(bad.validate().is_err());
    }
}
