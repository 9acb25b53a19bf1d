//! Function models and weighted integral norms on `[0, 1]`.

use std::sync::Arc;

use crate::quad::{QuadConfig, QuadRule};
use crate::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Step used by the central-difference fallback derivative.
const FALLBACK_DIFF_STEP: f64 = 1e-6;

/// A target function on `[0, 1]`: an evaluator, an optional analytic
/// derivative, and endpoint singularity flags.
///
/// Evaluation requests at a flagged singular endpoint are clamped a fixed
/// offset into the interior (the `endpoint_offset` of [`QuadConfig`],
/// 1e-9 by default), so models like `x^(-1/4)` always return finite values.
/// Quadrature never needs the clamp — its nodes are strictly interior — but
/// dense verification grids and callers probing endpoints do.
#[derive(Clone)]
pub struct FunctionModel {
    name: String,
    eval_fn: RealFn,
    deriv_fn: Option<RealFn>,
    singular_left: bool,
    singular_right: bool,
    /// Declared constant `M` with `|f(x)| <= M * weight(x)` on the domain,
    /// if the model claims membership in a weighted space.
    domination: Option<f64>,
    clamp_offset: f64,
}

impl std::fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionModel")
            .field("name", &self.name)
            .field("has_deriv", &self.deriv_fn.is_some())
            .field("singular_left", &self.singular_left)
            .field("singular_right", &self.singular_right)
            .field("domination", &self.domination)
            .finish()
    }
}

impl FunctionModel {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval_fn: Arc::new(f),
            deriv_fn: None,
            singular_left: false,
            singular_right: false,
            domination: None,
            clamp_offset: QuadConfig::default().endpoint_offset,
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv_fn = Some(Arc::new(df));
        self
    }

    pub fn with_singular_left(mut self) -> Self {
        self.singular_left = true;
        self
    }

    pub fn with_singular_right(mut self) -> Self {
        self.singular_right = true;
        self
    }

    pub fn with_domination(mut self, bound: f64) -> Self {
        self.domination = Some(bound);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domination(&self) -> Option<f64> {
        self.domination
    }

    pub fn is_singular(&self) -> bool {
        self.singular_left || self.singular_right
    }

    pub fn is_singular_left(&self) -> bool {
        self.singular_left
    }

    pub fn is_singular_right(&self) -> bool {
        self.singular_right
    }

    /// Clamps a requested point away from flagged singular endpoints.
    pub fn clamp_point(&self, x: f64) -> f64 {
        let mut x = x;
        if self.singular_left && x < self.clamp_offset {
            x = self.clamp_offset;
        }
        if self.singular_right && x > 1.0 - self.clamp_offset {
            x = 1.0 - self.clamp_offset;
        }
        x
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval_fn)(self.clamp_point(x))
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv_fn.is_some()
    }

    /// Analytic derivative if declared, otherwise a second-order difference:
    /// central in the interior, three-point one-sided at the edges.
    pub fn derivative(&self, x: f64) -> f64 {
        if let Some(df) = &self.deriv_fn {
            return df(self.clamp_point(x));
        }
        let h = FALLBACK_DIFF_STEP;
        if x - h >= 0.0 && x + h <= 1.0 {
            (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
        } else if x - h < 0.0 {
            (-3.0 * self.eval(x) + 4.0 * self.eval(x + h) - self.eval(x + 2.0 * h)) / (2.0 * h)
        } else {
            (3.0 * self.eval(x) - 4.0 * self.eval(x - h) + self.eval(x - 2.0 * h)) / (2.0 * h)
        }
    }

    /// Checks the declared domination constant at every quadrature node of
    /// `space`: `|f(x)| <= M * weight(x)`.
    pub fn check_domination(&self, space: &WeightedSpace) -> Result<bool> {
        let bound = match self.domination {
            Some(b) => b,
            None => return Ok(true),
        };
        let rule = QuadRule::new(&space.quad, 0.0, 1.0)?;
        for x in rule.nodes() {
            if self.eval(x).abs() > bound * space.weight(x) * (1.0 + 1e-12) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A weighted `L_p` space on `[0, 1]`: exponent `p >= 1`, a positive weight,
/// and the quadrature configuration its norm integrals use.
#[derive(Clone)]
pub struct WeightedSpace {
    pub p: f64,
    weight_fn: RealFn,
    pub quad: QuadConfig,
}

impl std::fmt::Debug for WeightedSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightedSpace").field("p", &self.p).field("quad", &self.quad).finish()
    }
}

impl WeightedSpace {
    pub fn new(
        p: f64,
        weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quad: QuadConfig,
    ) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Config(format!("exponent p must satisfy 1 <= p < inf, got {p}")));
        }
        quad.validate()?;
        Ok(Self { p, weight_fn: Arc::new(weight), quad })
    }

    /// The unweighted space (weight identically one).
    pub fn unweighted(p: f64, quad: QuadConfig) -> Result<Self> {
        Self::new(p, |_| 1.0, quad)
    }

    pub fn with_exponent(&self, p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Config(format!("exponent p must satisfy 1 <= p < inf, got {p}")));
        }
        Ok(Self { p, weight_fn: self.weight_fn.clone(), quad: self.quad })
    }

    pub fn weight(&self, x: f64) -> f64 {
        (self.weight_fn)(x)
    }
}

/// `(∫_0^1 |f(x)/weight(x)|^p dx)^(1/p)` by composite quadrature.
///
/// A vanishing or non-finite weight at a node is a configuration error; a
/// non-finite `f` at a node is an evaluation error naming the node.
pub fn weighted_norm(f: impl FnMut(f64) -> f64, space: &WeightedSpace) -> Result<f64> {
    weighted_norm_over(f, 0.0, 1.0, space)
}

/// Same as [`weighted_norm`] over an explicit interval (enclosure gaps on
/// `[-1, 1]` use this).
pub fn weighted_norm_over(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    space: &WeightedSpace,
) -> Result<f64> {
    let rule = QuadRule::new(&space.quad, a, b)?;
    let p = space.p;
    let mut acc = 0.0;
    for &(x, w) in rule.points() {
        let beta = space.weight(x);
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Config(format!("weight is {beta} at x = {x}; must be positive")));
        }
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x });
        }
        let r = (v / beta).abs();
        acc += w * if p == 1.0 { r } else { r.powf(p) };
    }
    Ok(if p == 1.0 { acc } else { acc.powf(p.recip()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_integrate;

    #[test]
    fn l2_norm_of_identity() {
        let space = WeightedSpace::unweighted(2.0, QuadConfig::default()).unwrap();
        let n = weighted_norm(|x| x, &space).unwrap();
        assert!((n - 1.0 / 3.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn weighted_l2_norm_of_singular_model() {
        // |x^(-1/4) / x^(-1/2)|^2 = x^(1/2), integral 2/3.
        let space =
            WeightedSpace::new(2.0, |x: f64| x.powf(-0.5), QuadConfig::default()).unwrap();
        let model = FunctionModel::new("inv_quartic_root", |x: f64| x.powf(-0.25))
            .with_singular_left()
            .with_domination(1.0);
        let n = weighted_norm(|x| model.eval(x), &space).unwrap();
        assert!((n - (2.0 / 3.0_f64).sqrt()).abs() < 1e-6);
        assert!(model.check_domination(&space).unwrap());
    }

    #[test]
    fn singular_model_integrates_with_clamped_endpoint() {
        let model = FunctionModel::new("inv_quartic_root", |x: f64| x.powf(-0.25))
            .with_singular_left();
        // Endpoint evaluation is clamped, not infinite.
        assert!(model.eval(0.0).is_finite());
        let v = quad_integrate(|x| model.eval(x), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn vanishing_weight_is_a_config_error() {
        let space = WeightedSpace::new(1.0, |_| 0.0, QuadConfig::default()).unwrap();
        assert!(matches!(weighted_norm(|x| x, &space), Err(Error::Config(_))));
    }

    #[test]
    fn bad_exponent_is_rejected() {
        assert!(WeightedSpace::unweighted(0.5, QuadConfig::default()).is_err());
        assert!(WeightedSpace::unweighted(f64::INFINITY, QuadConfig::default()).is_err());
    }

    #[test]
    fn fallback_derivative_matches_analytic() {
        let with = FunctionModel::new("sin10", |x| (10.0 * x).sin())
            .with_derivative(|x| 10.0 * (10.0 * x).cos());
        let without = FunctionModel::new("sin10", |x| (10.0 * x).sin());
        for &x in &[0.0, 0.37, 0.5, 1.0] {
            assert!((with.derivative(x) - without.derivative(x)).abs() < 1e-7);
        }
    }
}
