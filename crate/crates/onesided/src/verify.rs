//! Inequality harness: evaluates both sides of every ordering and bound the
//! library promises, over a standard function suite, and renders the results
//! as deterministic reports.

use serde::{Deserialize, Serialize};

use crate::moduli::{averaged_modulus, ModulusConfig};
use crate::operators::{
    kernel_majorant_poly, kernel_minorant_poly, smooth_majorant, smooth_minorant,
};
use crate::oracle::{best_onesided, best_twosided};
use crate::sandwich::{
    build_step_sandwich, default_cert_nodes, reflect_pair, step_gap_bound, SandwichPair,
    DEFAULT_SAFETY,
};
use crate::space::{weighted_norm, FunctionModel, WeightedSpace};
use crate::Result;

/// Absolute tolerance for pointwise ordering checks.
pub const ORDERING_TOL: f64 = 1e-8;
/// Looser tolerance for kernel operators applied to raw (possibly kinked)
/// models, where jump panels cost a few digits of quadrature accuracy.
pub const KERNEL_ORDERING_TOL: f64 = 1e-6;
/// Relative slack for modulus-based bounds (the discretized sup
/// underestimates the modulus).
pub const MODULUS_SLACK: f64 = 0.05;
/// A bound with a vanishing right-hand side passes only if the left side is
/// this small.
const DEGENERATE_TOL: f64 = 1e-8;
/// Grid resolution for pointwise ordering checks.
const ORDERING_GRID: usize = 1001;
/// Oracle grid resolution used by the suite.
const ORACLE_GRID: usize = 512;

/// One evaluated inequality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub function_id: String,
    pub k: usize,
    pub y: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub min_margin: f64,
    pub pass: bool,
    pub grid_n: usize,
}

/// Identification half of a report; the check functions fill in the numbers.
#[derive(Debug, Clone)]
pub struct ReportLabel {
    pub check_id: String,
    pub function_id: String,
    pub k: usize,
    pub y: f64,
    pub p: f64,
}

impl ReportLabel {
    pub fn new(check_id: &str, function_id: &str, k: usize) -> Self {
        Self {
            check_id: check_id.to_string(),
            function_id: function_id.to_string(),
            k,
            y: 0.0,
            p: 1.0,
        }
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = y;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    fn error_report(&self, grid_n: usize) -> VerificationReport {
        VerificationReport {
            check_id: self.check_id.clone(),
            function_id: self.function_id.clone(),
            k: self.k,
            y: self.y,
            p: self.p,
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: f64::NAN,
            min_margin: f64::NAN,
            pass: false,
            grid_n,
        }
    }
}

/// A function under test, optionally carrying its own weighted space, and a
/// flag for the checks that need an integrable derivative.
#[derive(Debug, Clone)]
pub struct SuiteMember {
    pub model: FunctionModel,
    pub space_override: Option<WeightedSpace>,
    pub absolutely_continuous: bool,
}

/// The standard six-function suite: a constant, the identity, a kink, a fast
/// oscillation, an exponential, and an unbounded weight-dominated power.
pub fn default_suite() -> Result<Vec<SuiteMember>> {
    let singular_space =
        WeightedSpace::new(1.0, |x: f64| x.powf(-0.5), crate::quad::QuadConfig::default())?;
    Ok(vec![
        SuiteMember {
            model: FunctionModel::new("constant", |_| 1.0).with_derivative(|_| 0.0),
            space_override: None,
            absolutely_continuous: true,
        },
        SuiteMember {
            model: FunctionModel::new("identity", |x| x).with_derivative(|_| 1.0),
            space_override: None,
            absolutely_continuous: true,
        },
        SuiteMember {
            model: FunctionModel::new("abs03", |x: f64| (x - 0.3).abs())
                .with_derivative(|x: f64| if x < 0.3 { -1.0 } else { 1.0 }),
            space_override: None,
            absolutely_continuous: true,
        },
        SuiteMember {
            model: FunctionModel::new("sin10", |x: f64| (10.0 * x).sin())
                .with_derivative(|x: f64| 10.0 * (10.0 * x).cos()),
            space_override: None,
            absolutely_continuous: true,
        },
        SuiteMember {
            model: FunctionModel::new("exp", |x: f64| x.exp()).with_derivative(|x: f64| x.exp()),
            space_override: None,
            absolutely_continuous: true,
        },
        SuiteMember {
            // Unbounded at the left end but dominated by the weight; its
            // derivative is not integrable, so derivative-based checks skip
            // it.
            model: FunctionModel::new("singular", |x: f64| x.powf(-0.25))
                .with_derivative(|x: f64| -0.25 * x.powf(-1.25))
                .with_singular_left()
                .with_domination(1.0),
            space_override: Some(singular_space),
            absolutely_continuous: false,
        },
    ])
}

/// Uniform check grid on [0, 1]; endpoints flagged singular on the model are
/// pulled inward by half a grid step, since pointwise comparisons against a
/// clamped pole are meaningless there.
pub fn check_grid(model: &FunctionModel, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let spacing = 1.0 / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| i as f64 * spacing).collect();
    let inset = 0.5 * spacing;
    if model.is_singular_left() {
        let first = grid.first_mut().expect("grid is nonempty");
        if *first < inset {
            *first = inset;
        }
    }
    if model.is_singular_right() {
        let last = grid.last_mut().expect("grid is nonempty");
        if *last > 1.0 - inset {
            *last = 1.0 - inset;
        }
    }
    grid
}

/// Pointwise three-way ordering `lower <= target <= upper` over a grid.
///
/// `lhs` is the worst lower margin, `rhs` the worst upper margin, and the
/// check passes when the smaller of the two stays above `-tol`. Evaluation
/// failures yield a failing report with NaN entries.
pub fn check_sandwich(
    label: &ReportLabel,
    lower: impl Fn(f64) -> Result<f64>,
    target: impl Fn(f64) -> Result<f64>,
    upper: impl Fn(f64) -> Result<f64>,
    grid: &[f64],
    tol: f64,
) -> VerificationReport {
    let mut below = f64::INFINITY;
    let mut above = f64::INFINITY;
    for &x in grid {
        let (lo, mid, hi) = match (lower(x), target(x), upper(x)) {
            (Ok(lo), Ok(mid), Ok(hi)) if lo.is_finite() && mid.is_finite() && hi.is_finite() => {
                (lo, mid, hi)
            }
            _ => return label.error_report(grid.len()),
        };
        below = below.min(mid - lo);
        above = above.min(hi - mid);
    }
    let min_margin = below.min(above);
    VerificationReport {
        check_id: label.check_id.clone(),
        function_id: label.function_id.clone(),
        k: label.k,
        y: label.y,
        p: label.p,
        lhs: below,
        rhs: above,
        ratio: min_margin,
        min_margin,
        pass: min_margin >= -tol,
        grid_n: grid.len(),
    }
}

/// Pointwise two-way ordering `below <= above` over a grid; the worst margin
/// must stay above `-tol`.
pub fn check_ordering(
    label: &ReportLabel,
    below: impl Fn(f64) -> Result<f64>,
    above: impl Fn(f64) -> Result<f64>,
    grid: &[f64],
    tol: f64,
) -> VerificationReport {
    let mut margin = f64::INFINITY;
    for &x in grid {
        let (lo, hi) = match (below(x), above(x)) {
            (Ok(lo), Ok(hi)) if lo.is_finite() && hi.is_finite() => (lo, hi),
            _ => return label.error_report(grid.len()),
        };
        margin = margin.min(hi - lo);
    }
    VerificationReport {
        check_id: label.check_id.clone(),
        function_id: label.function_id.clone(),
        k: label.k,
        y: label.y,
        p: label.p,
        lhs: margin,
        rhs: -tol,
        ratio: margin,
        min_margin: margin,
        pass: margin >= -tol,
        grid_n: grid.len(),
    }
}

/// Norm-level bound `lhs <= constant * modulus * (1 + slack)`.
///
/// `ratio` is `lhs / (constant * modulus)`. A vanishing right-hand side is
/// degenerate: the check then passes only when `lhs` is negligibly small.
pub fn check_bound(
    label: &ReportLabel,
    lhs: f64,
    constant: f64,
    modulus: f64,
    slack: f64,
    grid_n: usize,
) -> VerificationReport {
    let rhs = constant * modulus;
    let (ratio, pass) = if !lhs.is_finite() || !rhs.is_finite() {
        (f64::NAN, false)
    } else if rhs > 0.0 {
        let ratio = lhs / rhs;
        (ratio, ratio <= 1.0 + slack)
    } else if lhs.abs() <= DEGENERATE_TOL {
        (0.0, true)
    } else {
        (f64::INFINITY, false)
    };
    VerificationReport {
        check_id: label.check_id.clone(),
        function_id: label.function_id.clone(),
        k: label.k,
        y: label.y,
        p: label.p,
        lhs,
        rhs,
        ratio,
        min_margin: rhs * (1.0 + slack) - lhs,
        pass,
        grid_n,
    }
}

fn bound_or_error(
    label: &ReportLabel,
    lhs: Result<f64>,
    constant: f64,
    modulus: Result<f64>,
    slack: f64,
    grid_n: usize,
) -> VerificationReport {
    match (lhs, modulus) {
        (Ok(l), Ok(m)) => check_bound(label, l, constant, m, slack, grid_n),
        _ => label.error_report(grid_n),
    }
}

/// The constant `2 / (1 - y)^(1/p)` in the smoother error bound.
pub fn smoother_error_constant(y: f64, p: f64) -> f64 {
    2.0 / (1.0 - y).powf(1.0 / p)
}

/// The closed-form constant `2 (4 + 12 k pi^2 / (k + 2))` bounding the
/// automatic pair's gap norm against the first-order averaged modulus at
/// width `1/k`, valid for `k >= 2`.
pub fn auto_pair_constant(k: usize) -> f64 {
    let k_f = k as f64;
    2.0 * (4.0 + 12.0 * k_f * std::f64::consts::PI.powi(2) / (k_f + 2.0))
}

/// Runs every check over the cross-product of suite members and degrees.
///
/// The space's exponent must be 1 (oracle checks are exact only there);
/// members with their own space keep it. Individual evaluation failures are
/// recorded as failing reports and the run continues. Reports come back
/// sorted by (check, function, degree, width, exponent).
pub fn run_theorem_suite(
    functions: &[SuiteMember],
    k_values: &[usize],
    space: &WeightedSpace,
) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for &k in k_values {
        run_degree(functions, k, space, &mut reports);
    }
    sort_reports(&mut reports);
    reports
}

fn run_degree(
    functions: &[SuiteMember],
    k: usize,
    space: &WeightedSpace,
    reports: &mut Vec<VerificationReport>,
) {
    let y = 1.0 / (k.max(2) as f64);
    let standard = match build_step_sandwich(k, default_cert_nodes(k), DEFAULT_SAFETY) {
        Ok(pair) => pair,
        Err(_) => {
            reports.push(ReportLabel::new("step-gap-bound", "step", k).error_report(0));
            return;
        }
    };
    reports.push(check_bound(
        &ReportLabel::new("step-gap-bound", "step", k),
        standard.gap(),
        step_gap_bound(k),
        1.0,
        0.0,
        standard.margin_grid(),
    ));
    let reflected = match reflect_pair(&standard) {
        Ok(pair) => pair,
        Err(_) => {
            reports.push(ReportLabel::new("composite-sandwich", "step", k).error_report(0));
            return;
        }
    };
    for member in functions {
        run_member_checks(member, k, y, &standard, &reflected, space, reports);
    }
}

#[allow(clippy::too_many_arguments)]
fn run_member_checks(
    member: &SuiteMember,
    k: usize,
    y: f64,
    standard: &SandwichPair,
    reflected: &SandwichPair,
    base_space: &WeightedSpace,
    reports: &mut Vec<VerificationReport>,
) {
    let model = &member.model;
    let name = model.name().to_string();
    let space = member.space_override.as_ref().unwrap_or(base_space);
    let quad = space.quad;
    let norm_grid = quad.total_nodes();
    let cfg = ModulusConfig::new(1);
    let grid = check_grid(model, ORDERING_GRID);
    let label = |check: &str| ReportLabel::new(check, &name, k).with_y(y).with_p(space.p);

    // Smoothers and their materialized tables; everything downstream needs
    // them, so an early failure marks all dependent checks.
    let built = (|| -> Result<_> {
        let below = smooth_minorant(model, y, &cfg, &quad)?;
        let above = smooth_majorant(model, y, &cfg, &quad)?;
        let below_table = below.materialize()?;
        let above_table = above.materialize()?;
        let lower_poly = kernel_minorant_poly(&below_table, reflected, &quad)?;
        let upper_poly = kernel_majorant_poly(&above_table, reflected, &quad)?;
        Ok((below, above, below_table, above_table, lower_poly, upper_poly))
    })();
    let (below, above, below_table, above_table, lower_poly, upper_poly) = match built {
        Ok(parts) => parts,
        Err(_) => {
            for check in [
                "smoother-sandwich",
                "composite-sandwich",
                "smoother-above-composite-minorant",
                "smoother-below-composite-majorant",
                "smoother-error-bound",
                "smoother-deriv-bound",
                "composite-error-bound",
                "auto-pair-gap-bound",
                "oracle-dominance",
                "oracle-ordering",
            ] {
                reports.push(label(check).error_report(grid.len()));
            }
            return;
        }
    };

    reports.push(check_sandwich(
        &label("smoother-sandwich"),
        |x| below.eval(x),
        |x| Ok(model.eval(x)),
        |x| above.eval(x),
        &grid,
        ORDERING_TOL,
    ));
    reports.push(check_sandwich(
        &label("composite-sandwich"),
        |x| lower_poly.eval(x),
        |x| Ok(model.eval(x)),
        |x| upper_poly.eval(x),
        &grid,
        ORDERING_TOL,
    ));
    reports.push(check_ordering(
        &label("smoother-above-composite-minorant"),
        |x| lower_poly.eval(x),
        |x| below.eval(x),
        &grid,
        ORDERING_TOL,
    ));
    reports.push(check_ordering(
        &label("smoother-below-composite-majorant"),
        |x| above.eval(x),
        |x| upper_poly.eval(x),
        &grid,
        ORDERING_TOL,
    ));

    if member.absolutely_continuous {
        // Kernel operators applied to the raw model: need the derivative to
        // carry the function, which the singular member's does not.
        match (
            kernel_minorant_poly(model, reflected, &quad),
            kernel_majorant_poly(model, reflected, &quad),
        ) {
            (Ok(direct_lower), Ok(direct_upper)) => {
                reports.push(check_sandwich(
                    &label("kernel-sandwich"),
                    |x| direct_lower.eval(x),
                    |x| Ok(model.eval(x)),
                    |x| direct_upper.eval(x),
                    &grid,
                    KERNEL_ORDERING_TOL,
                ));
                let plain = WeightedSpace::unweighted(1.0, quad);
                match plain {
                    Ok(plain) => {
                        let error = weighted_norm(
                            |x| model.eval(x) - direct_lower.eval(x).unwrap_or(f64::NAN),
                            &plain,
                        );
                        let derivative_mass =
                            weighted_norm(|x| model.derivative(x), &plain);
                        reports.push(bound_or_error(
                            &label("kernel-error-bound"),
                            error,
                            standard.gap(),
                            derivative_mass,
                            1e-6,
                            norm_grid,
                        ));
                    }
                    Err(_) => reports.push(label("kernel-error-bound").error_report(norm_grid)),
                }
            }
            _ => {
                reports.push(label("kernel-sandwich").error_report(grid.len()));
                reports.push(label("kernel-error-bound").error_report(norm_grid));
            }
        }
    }

    // Norm-level bounds in the member's own space.
    let modulus = averaged_modulus(model, y, &cfg, space);
    let smoother_error =
        weighted_norm(|x| model.eval(x) - below.eval(x).unwrap_or(f64::NAN), space);
    reports.push(bound_or_error(
        &label("smoother-error-bound"),
        smoother_error,
        smoother_error_constant(y, space.p),
        modulus.clone(),
        MODULUS_SLACK,
        norm_grid,
    ));
    if let Ok(square_space) = space.with_exponent(2.0) {
        let modulus_sq = averaged_modulus(model, y, &cfg, &square_space);
        let error_sq = weighted_norm(
            |x| model.eval(x) - below.eval(x).unwrap_or(f64::NAN),
            &square_space,
        );
        reports.push(bound_or_error(
            &label("smoother-error-bound").with_p(2.0),
            error_sq,
            smoother_error_constant(y, 2.0),
            modulus_sq,
            MODULUS_SLACK,
            norm_grid,
        ));
    }
    let slope_mass = weighted_norm(
        |x| {
            let g = below_table.derivative(x).abs();
            let h = above_table.derivative(x).abs();
            g.max(h)
        },
        space,
    );
    reports.push(bound_or_error(
        &label("smoother-deriv-bound"),
        slope_mass,
        3.0 / y,
        modulus.clone(),
        MODULUS_SLACK,
        norm_grid,
    ));
    let composite_error = (|| -> Result<f64> {
        let low = weighted_norm(|x| model.eval(x) - lower_poly.eval(x).unwrap_or(f64::NAN), space)?;
        let high =
            weighted_norm(|x| model.eval(x) - upper_poly.eval(x).unwrap_or(f64::NAN), space)?;
        Ok(low.max(high))
    })();
    reports.push(bound_or_error(
        &label("composite-error-bound"),
        composite_error,
        smoother_error_constant(y, space.p) + 3.0 * standard.gap() / y,
        modulus.clone(),
        MODULUS_SLACK,
        norm_grid,
    ));
    let pair_gap = weighted_norm(
        |x| upper_poly.eval(x).unwrap_or(f64::NAN) - lower_poly.eval(x).unwrap_or(f64::NAN),
        space,
    );
    if k >= 2 {
        reports.push(bound_or_error(
            &label("auto-pair-gap-bound"),
            pair_gap.clone(),
            auto_pair_constant(k),
            modulus,
            0.0,
            norm_grid,
        ));
    }

    // Oracle comparisons (p = 1 spaces only; the default suite qualifies).
    match (best_onesided(model, k, space, ORACLE_GRID), pair_gap) {
        (Ok(enclosed), Ok(pair_gap)) => {
            reports.push(check_bound(
                &label("oracle-dominance"),
                enclosed.value,
                1.0,
                pair_gap + 1e-8,
                0.0,
                enclosed.grid_n,
            ));
            match best_twosided(model, k, space, ORACLE_GRID) {
                Ok(fitted) => reports.push(check_bound(
                    &label("oracle-ordering"),
                    fitted.value,
                    1.0,
                    enclosed.value + 1e-8,
                    0.0,
                    fitted.grid_n,
                )),
                Err(_) => reports.push(label("oracle-ordering").error_report(ORACLE_GRID)),
            }
        }
        _ => {
            reports.push(label("oracle-dominance").error_report(ORACLE_GRID));
            reports.push(label("oracle-ordering").error_report(ORACLE_GRID));
        }
    }
}

/// Deterministic report order: check id, then function, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        (a.check_id.as_str(), a.function_id.as_str(), a.k)
            .cmp(&(b.check_id.as_str(), b.function_id.as_str(), b.k))
            .then(a.y.total_cmp(&b.y))
            .then(a.p.total_cmp(&b.p))
    });
}

/// Fixed-schema CSV: a version comment, a header row, one row per report,
/// floats at full precision.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("# schema=1\n");
    out.push_str("check_id,function_id,k,y,p,lhs,rhs,ratio,min_margin,pass,grid_n\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
            r.check_id,
            r.function_id,
            r.k,
            r.y,
            r.p,
            r.lhs,
            r.rhs,
            r.ratio,
            r.min_margin,
            r.pass,
            r.grid_n
        ));
    }
    out
}

/// JSON array of report objects, pretty-printed.
pub fn reports_to_json(reports: &[VerificationReport]) -> Result<String> {
    serde_json::to_string_pretty(reports)
        .map_err(|e| crate::Error::Config(format!("report serialization failed: {e}")))
}
