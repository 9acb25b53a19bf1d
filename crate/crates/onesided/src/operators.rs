//! The approximation pipeline: integral smoothers that trade accuracy for a
//! guaranteed side, kernel operators that turn a step sandwich into
//! polynomial minorants/majorants of an absolutely continuous function, and
//! their composites that work for merely integrable inputs.

use std::sync::Arc;

use crate::moduli::{ModulusConfig, ModulusTable, TABLE_CELLS};
use crate::poly::Polynomial;
use crate::quad::{quad_integrate, QuadConfig};
use crate::sandwich::{build_step_sandwich, default_cert_nodes, reflect_pair, Orientation, SandwichPair, DEFAULT_SAFETY};
use crate::space::FunctionModel;
use crate::{Error, Result, Side};

const DOMAIN_SLACK: f64 = 1e-9;

fn check_unit_interval(x: f64) -> Result<()> {
    if !x.is_finite() || !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!("point {x} is outside [0, 1]")));
    }
    Ok(())
}

/// Splits the derivative into its positive and negative parts, as closures
/// over the model's derivative (analytic when declared, central differences
/// otherwise). The parts are nonnegative and their difference is the
/// derivative.
pub fn split_derivative(
    model: &FunctionModel,
) -> (impl Fn(f64) -> f64 + Send + Sync, impl Fn(f64) -> f64 + Send + Sync) {
    let plus = model.clone();
    let minus = model.clone();
    (move |x| plus.derivative(x).max(0.0), move |x| (-minus.derivative(x)).max(0.0))
}

fn require_reflected(pair: &SandwichPair) -> Result<()> {
    if pair.orientation() != Orientation::Reflected {
        return Err(Error::InvalidArgument(
            "kernel operators need the reflected pair; apply reflect_pair first".into(),
        ));
    }
    Ok(())
}

/// Polynomial minorant of an absolutely continuous function, evaluated at a
/// point: the value at the origin plus the split-derivative integrals taken
/// against the pair's kernels, the lower kernel weighting the rising part.
pub fn kernel_minorant(
    model: &FunctionModel,
    pair: &SandwichPair,
    x: f64,
    quad: &QuadConfig,
) -> Result<f64> {
    kernel_value(model, pair, x, quad, Side::Lower)
}

/// Mirror of [`kernel_minorant`] with the kernels swapped; never falls below
/// the function (up to quadrature noise).
pub fn kernel_majorant(
    model: &FunctionModel,
    pair: &SandwichPair,
    x: f64,
    quad: &QuadConfig,
) -> Result<f64> {
    kernel_value(model, pair, x, quad, Side::Upper)
}

fn kernel_value(
    model: &FunctionModel,
    pair: &SandwichPair,
    x: f64,
    quad: &QuadConfig,
    side: Side,
) -> Result<f64> {
    require_reflected(pair)?;
    check_unit_interval(x)?;
    quad.validate()?;
    let (rising, falling) = split_derivative(model);
    let (for_rising, for_falling) = match side {
        Side::Lower => (pair.lower(), pair.upper()),
        Side::Upper => (pair.upper(), pair.lower()),
    };
    let anchor = model.eval(0.0);
    let gain =
        quad_integrate(|t| for_rising.eval(t - x).unwrap_or(f64::NAN) * rising(t), 0.0, 1.0, quad)?;
    let loss = quad_integrate(
        |t| for_falling.eval(t - x).unwrap_or(f64::NAN) * falling(t),
        0.0,
        1.0,
        quad,
    )?;
    Ok(anchor + gain - loss)
}

/// [`kernel_minorant`] materialized as a polynomial. The pointwise value is
/// itself a polynomial of the pair's degree in the evaluation point, so
/// interpolating it at degree + 1 Chebyshev nodes reproduces it exactly.
pub fn kernel_minorant_poly(
    model: &FunctionModel,
    pair: &SandwichPair,
    quad: &QuadConfig,
) -> Result<Polynomial> {
    kernel_poly(model, pair, quad, Side::Lower)
}

/// [`kernel_majorant`] materialized as a polynomial.
pub fn kernel_majorant_poly(
    model: &FunctionModel,
    pair: &SandwichPair,
    quad: &QuadConfig,
) -> Result<Polynomial> {
    kernel_poly(model, pair, quad, Side::Upper)
}

fn kernel_poly(
    model: &FunctionModel,
    pair: &SandwichPair,
    quad: &QuadConfig,
    side: Side,
) -> Result<Polynomial> {
    require_reflected(pair)?;
    let mut failure = None;
    let poly = Polynomial::interpolate(pair.degree() + 1, (0.0, 1.0), |x| {
        match kernel_value(model, pair, x, quad, side) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(poly),
    }
}

/// An integral smoother pinned to one side of its model: averages the model
/// over a window scaled by `y` and shifts by the first-order local modulus,
/// downward for the minorant and upward for the majorant.
#[derive(Clone)]
pub struct Smoother {
    model: FunctionModel,
    y: f64,
    side: Side,
    table: ModulusTable,
    quad: QuadConfig,
}

/// Builds the smoother lying below the model.
pub fn smooth_minorant(
    model: &FunctionModel,
    y: f64,
    cfg: &ModulusConfig,
    quad: &QuadConfig,
) -> Result<Smoother> {
    Smoother::build(model, y, cfg, quad, Side::Lower)
}

/// Builds the smoother lying above the model.
pub fn smooth_majorant(
    model: &FunctionModel,
    y: f64,
    cfg: &ModulusConfig,
    quad: &QuadConfig,
) -> Result<Smoother> {
    Smoother::build(model, y, cfg, quad, Side::Upper)
}

impl Smoother {
    /// The difference order of the modulus is pinned to one here; `cfg`
    /// contributes only its sampling densities.
    fn build(
        model: &FunctionModel,
        y: f64,
        cfg: &ModulusConfig,
        quad: &QuadConfig,
        side: Side,
    ) -> Result<Self> {
        if !y.is_finite() || y <= 0.0 || y >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "smoothing width must lie strictly inside (0, 1), got {y}"
            )));
        }
        quad.validate()?;
        let first_order = ModulusConfig { order: 1, ..*cfg };
        first_order.validate()?;
        let table = ModulusTable::build(model, y, &first_order)?;
        Ok(Self { model: model.clone(), y, side, table, quad: *quad })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Averages `model(u) -/+ modulus(u)` over the window
    /// `u = (1 - y) x + y t`, `t` running over the unit interval.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit_interval(x)?;
        let shift = match self.side {
            Side::Lower => -1.0,
            Side::Upper => 1.0,
        };
        quad_integrate(
            |t| {
                let u = (1.0 - self.y) * x + self.y * t;
                self.model.eval(u) + shift * self.table.eval(u)
            },
            0.0,
            1.0,
            &self.quad,
        )
    }

    /// Samples the smoother on a uniform grid and wraps the table as a new
    /// model: piecewise-linear values with a central-difference derivative
    /// table, both interpolated. Smoothed functions are bounded, so the
    /// result carries no singularity flags.
    pub fn materialize(&self) -> Result<FunctionModel> {
        let cells = TABLE_CELLS;
        let spacing = 1.0 / cells as f64;
        let mut values = Vec::with_capacity(cells + 1);
        for i in 0..=cells {
            values.push(self.eval(i as f64 * spacing)?);
        }
        let mut slopes = vec![0.0; cells + 1];
        slopes[0] = (values[1] - values[0]) / spacing;
        slopes[cells] = (values[cells] - values[cells - 1]) / spacing;
        for i in 1..cells {
            slopes[i] = (values[i + 1] - values[i - 1]) / (2.0 * spacing);
        }
        let label = match self.side {
            Side::Lower => "smooth-lower",
            Side::Upper => "smooth-upper",
        };
        let name = format!("{label}({}, y={})", self.model.name(), self.y);
        let values = Arc::new(values);
        let slopes = Arc::new(slopes);
        let value_table = Arc::clone(&values);
        let slope_table = Arc::clone(&slopes);
        Ok(FunctionModel::new(name, move |x| sample_table(&value_table, x))
            .with_derivative(move |x| sample_table(&slope_table, x)))
    }
}

/// Linear interpolation on a uniform table over [0, 1].
fn sample_table(values: &[f64], x: f64) -> f64 {
    let cells = values.len() - 1;
    let clamped = x.clamp(0.0, 1.0);
    let position = clamped * cells as f64;
    let cell = (position.floor() as usize).min(cells - 1);
    let frac = position - cell as f64;
    values[cell] + frac * (values[cell + 1] - values[cell])
}

/// Composite minorant: the kernel minorant applied to the materialized lower
/// smoother. Works for models without a usable derivative of their own.
pub fn composite_minorant(
    model: &FunctionModel,
    pair: &SandwichPair,
    y: f64,
    cfg: &ModulusConfig,
    quad: &QuadConfig,
) -> Result<Polynomial> {
    require_reflected(pair)?;
    let smoothed = smooth_minorant(model, y, cfg, quad)?.materialize()?;
    kernel_minorant_poly(&smoothed, pair, quad)
}

/// Composite majorant: the kernel majorant of the materialized upper
/// smoother.
pub fn composite_majorant(
    model: &FunctionModel,
    pair: &SandwichPair,
    y: f64,
    cfg: &ModulusConfig,
    quad: &QuadConfig,
) -> Result<Polynomial> {
    require_reflected(pair)?;
    let smoothed = smooth_majorant(model, y, cfg, quad)?.materialize()?;
    kernel_majorant_poly(&smoothed, pair, quad)
}

/// The automatic pair at degree `k`: composites with the smoothing width
/// tied to the degree as `y = 1/k`. Requires `k >= 2`.
pub fn sandwich_polynomials(
    model: &FunctionModel,
    degree: usize,
    quad: &QuadConfig,
) -> Result<(Polynomial, Polynomial)> {
    if degree < 2 {
        return Err(Error::InvalidArgument("automatic pairs need degree at least 2".into()));
    }
    let pair = reflect_pair(&build_step_sandwich(
        degree,
        default_cert_nodes(degree),
        DEFAULT_SAFETY,
    )?)?;
    let y = 1.0 / degree as f64;
    let cfg = ModulusConfig::new(1);
    let lower = composite_minorant(model, &pair, y, &cfg, quad)?;
    let upper = composite_majorant(model, &pair, y, &cfg, quad)?;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::weighted_norm;
    use crate::space::WeightedSpace;

    fn identity() -> FunctionModel {
        FunctionModel::new("identity", |x| x).with_derivative(|_| 1.0)
    }

    fn constant(c: f64) -> FunctionModel {
        FunctionModel::new("constant", move |_| c)
    }

    fn sine_without_derivative() -> FunctionModel {
        FunctionModel::new("sin10", |x: f64| (10.0 * x).sin())
    }

    fn reflected_constants_pair() -> SandwichPair {
        reflect_pair(&build_step_sandwich(0, 160, DEFAULT_SAFETY).unwrap()).unwrap()
    }

    #[test]
    fn split_parts_are_signed_slopes() {
        let (plus, minus) = split_derivative(&identity());
        assert_eq!(plus(0.3), 1.0);
        assert_eq!(minus(0.3), 0.0);
        let falling = FunctionModel::new("neg", |x: f64| -x).with_derivative(|_| -1.0);
        let (plus, minus) = split_derivative(&falling);
        assert_eq!(plus(0.7), 0.0);
        assert_eq!(minus(0.7), 1.0);
    }

    #[test]
    fn split_reconstructs_a_numeric_derivative() {
        let (plus, minus) = split_derivative(&sine_without_derivative());
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            let got = plus(x) - minus(x);
            let want = 10.0 * (10.0 * x).cos();
            assert!((got - want).abs() < 1e-8, "at {x}: {got} vs {want}");
            assert!(plus(x) >= 0.0 && minus(x) >= 0.0);
        }
    }

    #[test]
    fn kernel_hand_values_for_the_constants_pair() {
        let pair = reflected_constants_pair();
        let quad = QuadConfig::default();
        for x in [0.0, 0.25, 0.8] {
            assert!(kernel_minorant(&identity(), &pair, x, &quad).unwrap().abs() < 1e-12);
            let above = kernel_majorant(&identity(), &pair, x, &quad).unwrap();
            assert!((above - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_operators_fix_constants() {
        let pair = reflected_constants_pair();
        let quad = QuadConfig::default();
        let model = constant(2.7);
        assert!((kernel_minorant(&model, &pair, 0.4, &quad).unwrap() - 2.7).abs() < 1e-12);
        assert!((kernel_majorant(&model, &pair, 0.4, &quad).unwrap() - 2.7).abs() < 1e-12);
    }

    #[test]
    fn kernel_operators_reject_the_standard_orientation() {
        let pair = build_step_sandwich(4, default_cert_nodes(4), DEFAULT_SAFETY).unwrap();
        let quad = QuadConfig::default();
        assert!(kernel_minorant(&identity(), &pair, 0.5, &quad).is_err());
        assert!(kernel_majorant_poly(&identity(), &pair, &quad).is_err());
    }

    #[test]
    fn kernel_operators_bracket_a_smooth_function() {
        let pair =
            reflect_pair(&build_step_sandwich(8, default_cert_nodes(8), DEFAULT_SAFETY).unwrap())
                .unwrap();
        let quad = QuadConfig::default();
        let model = FunctionModel::new("exp", |x: f64| x.exp()).with_derivative(|x: f64| x.exp());
        let below_poly = kernel_minorant_poly(&model, &pair, &quad).unwrap();
        let above_poly = kernel_majorant_poly(&model, &pair, &quad).unwrap();
        assert_eq!(below_poly.degree(), 8);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let below = kernel_minorant(&model, &pair, x, &quad).unwrap();
            let above = kernel_majorant(&model, &pair, x, &quad).unwrap();
            assert!(below <= model.eval(x) + 1e-6, "minorant crossed at {x}");
            assert!(above >= model.eval(x) - 1e-6, "majorant crossed at {x}");
            // The polynomials reproduce the pointwise values exactly.
            assert!((below_poly.eval(x).unwrap() - below).abs() < 1e-9);
            assert!((above_poly.eval(x).unwrap() - above).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_error_is_within_the_gap_times_derivative_mass() {
        let pair =
            reflect_pair(&build_step_sandwich(8, default_cert_nodes(8), DEFAULT_SAFETY).unwrap())
                .unwrap();
        let quad = QuadConfig::default();
        let model = identity();
        let below = kernel_minorant_poly(&model, &pair, &quad).unwrap();
        let space = WeightedSpace::unweighted(1.0, quad).unwrap();
        let error =
            weighted_norm(|x| model.eval(x) - below.eval(x).unwrap_or(f64::NAN), &space).unwrap();
        // Derivative mass of the identity is one.
        assert!(error <= pair.gap() * (1.0 + 1e-6) + 1e-9, "error {error} vs gap {}", pair.gap());
    }

    #[test]
    fn smoother_hand_value_at_the_origin() {
        let quad = QuadConfig::default();
        let smoother =
            smooth_minorant(&identity(), 0.5, &ModulusConfig::new(1), &quad).unwrap();
        // Averaging the identity over [0, 1/2] gives 1/4; the averaged
        // boundary-truncated window modulus gives 7/16; their difference is
        // -3/16 exactly.
        assert!((smoother.eval(0.0).unwrap() + 0.1875).abs() < 1e-9);
    }

    #[test]
    fn smoothers_fix_constants() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        let model = constant(3.25);
        let below = smooth_minorant(&model, 0.25, &cfg, &quad).unwrap();
        let above = smooth_majorant(&model, 0.25, &cfg, &quad).unwrap();
        for x in [0.0, 0.31, 1.0] {
            assert!((below.eval(x).unwrap() - 3.25).abs() < 1e-12);
            assert!((above.eval(x).unwrap() - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn smoothing_commutes_with_constant_shifts() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        let base = sine_without_derivative();
        let shifted = FunctionModel::new("sin10+c", |x: f64| (10.0 * x).sin() + 2.5);
        let plain = smooth_minorant(&base, 0.125, &cfg, &quad).unwrap();
        let moved = smooth_minorant(&shifted, 0.125, &cfg, &quad).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let difference = moved.eval(x).unwrap() - plain.eval(x).unwrap();
            assert!((difference - 2.5).abs() < 1e-10, "shift drifted at {x}: {difference}");
        }
    }

    #[test]
    fn smoothers_bracket_a_kinked_function() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        let model = FunctionModel::new("abs03", |x: f64| (x - 0.3).abs());
        let below = smooth_minorant(&model, 0.25, &cfg, &quad).unwrap();
        let above = smooth_majorant(&model, 0.25, &cfg, &quad).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!(below.eval(x).unwrap() <= model.eval(x) + 1e-10);
            assert!(above.eval(x).unwrap() >= model.eval(x) - 1e-10);
        }
    }

    #[test]
    fn materialized_smoother_tracks_direct_evaluation() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        let smoother = smooth_majorant(&sine_without_derivative(), 0.125, &cfg, &quad).unwrap();
        let table = smoother.materialize().unwrap();
        assert!(table.has_derivative());
        for i in 0..=37 {
            let x = i as f64 / 37.0;
            let direct = smoother.eval(x).unwrap();
            assert!(
                (table.eval(x) - direct).abs() < 2e-5,
                "table drifted at {x}: {} vs {direct}",
                table.eval(x)
            );
        }
    }

    #[test]
    fn composite_chain_orders_around_a_kink() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        let model = FunctionModel::new("abs03", |x: f64| (x - 0.3).abs());
        let pair =
            reflect_pair(&build_step_sandwich(4, default_cert_nodes(4), DEFAULT_SAFETY).unwrap())
                .unwrap();
        let y = 0.25;
        let below = smooth_minorant(&model, y, &cfg, &quad).unwrap();
        let above = smooth_majorant(&model, y, &cfg, &quad).unwrap();
        let lower_poly = composite_minorant(&model, &pair, y, &cfg, &quad).unwrap();
        let upper_poly = composite_majorant(&model, &pair, y, &cfg, &quad).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let g = below.eval(x).unwrap();
            let h = above.eval(x).unwrap();
            assert!(lower_poly.eval(x).unwrap() <= g + 1e-8, "lower chain broke at {x}");
            assert!(g <= model.eval(x) + 1e-10);
            assert!(model.eval(x) <= h + 1e-10);
            assert!(upper_poly.eval(x).unwrap() >= h - 1e-8, "upper chain broke at {x}");
        }
    }

    #[test]
    fn automatic_pair_brackets_the_identity() {
        let quad = QuadConfig::default();
        let (below, above) = sandwich_polynomials(&identity(), 4, &quad).unwrap();
        assert!(below.degree() <= 4 && above.degree() <= 4);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!(below.eval(x).unwrap() <= x + 1e-8);
            assert!(above.eval(x).unwrap() >= x - 1e-8);
        }
    }

    #[test]
    fn bad_arguments_are_rejected() {
        let quad = QuadConfig::default();
        let cfg = ModulusConfig::new(1);
        assert!(smooth_minorant(&identity(), 0.0, &cfg, &quad).is_err());
        assert!(smooth_minorant(&identity(), 1.0, &cfg, &quad).is_err());
        assert!(smooth_minorant(&identity(), f64::NAN, &cfg, &quad).is_err());
        assert!(sandwich_polynomials(&identity(), 1, &quad).is_err());
        let smoother = smooth_minorant(&identity(), 0.5, &cfg, &quad).unwrap();
        assert!(smoother.eval(1.5).is_err());
    }
}
