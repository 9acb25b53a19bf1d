//! Ground-truth degrees of approximation by direct LP over a grid,
//! independent of the operator pipeline.
//!
//! The grid doubles as the quadrature rule for the objective: constraints
//! and integral weights live on the same composite Gauss nodes, so any
//! certified enclosure evaluated here is automatically feasible and its gap
//! norm dominates the reported optimum. Values are grid relaxations, hence
//! lower bounds on the exact degrees of approximation.

use crate::poly::Polynomial;
use crate::polyfit;
use crate::quad::{QuadConfig, QuadRule};
use crate::space::{FunctionModel, WeightedSpace};
use crate::{Error, Result, Side};

/// Outcome of a best-approximation LP.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct OracleResult {
    /// One-sided: the minorant. Two-sided: the single best polynomial.
    pub lower: Polynomial,
    /// One-sided: the majorant. Two-sided: absent.
    pub upper: Option<Polynomial>,
    /// Optimal objective: the weighted gap (one-sided) or the weighted
    /// absolute error (two-sided) summed over the grid.
    pub value: f64,
    /// Number of grid nodes actually used.
    pub grid_n: usize,
    /// Norm exponent the objective was taken in (always 1).
    pub p: f64,
}

struct Discretization {
    nodes: Vec<f64>,
    targets: Vec<f64>,
    costs: Vec<f64>,
}

/// Composite Gauss nodes shaped after the space's quadrature: same panel
/// count, per-panel node count raised until the grid reaches `grid_n`.
fn discretize(model: &FunctionModel, space: &WeightedSpace, grid_n: usize) -> Result<Discretization> {
    if space.p != 1.0 {
        return Err(Error::Unsupported(
            "the approximation oracle is exact only for p = 1".into(),
        ));
    }
    if grid_n == 0 {
        return Err(Error::InvalidArgument("grid_n must be positive".into()));
    }
    let panels = space.quad.panels.max(1);
    let per_panel = grid_n.div_ceil(panels).clamp(1, 64);
    let cfg = QuadConfig { panels, nodes_per_panel: per_panel, ..space.quad };
    let rule = QuadRule::new(&cfg, 0.0, 1.0)?;
    let mut nodes = Vec::with_capacity(rule.points().len());
    let mut targets = Vec::with_capacity(rule.points().len());
    let mut costs = Vec::with_capacity(rule.points().len());
    for &(x, w) in rule.points() {
        let beta = space.weight(x);
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Config(format!("weight is {beta} at x = {x}; must be positive")));
        }
        let value = model.eval(x);
        if !value.is_finite() {
            return Err(Error::NonFinite { x });
        }
        nodes.push(x);
        targets.push(value);
        costs.push(w / beta);
    }
    Ok(Discretization { nodes, targets, costs })
}

/// Moments defined as the grid sums themselves, which makes the grid weights
/// an exactly feasible dual point: the fit LPs can never be infeasible.
fn grid_moments(degree: usize, nodes: &[f64], costs: &[f64]) -> Vec<f64> {
    polyfit::basis_matrix(degree, (0.0, 1.0), nodes)
        .iter()
        .map(|row| row.iter().zip(costs).map(|(t, c)| t * c).sum())
        .collect()
}

/// Smallest weighted gap between polynomials of the given degree pinched
/// around the model on the grid: minimizes the gap integral subject to
/// `minorant <= model <= majorant` at every node.
pub fn best_onesided(
    model: &FunctionModel,
    degree: usize,
    space: &WeightedSpace,
    grid_n: usize,
) -> Result<OracleResult> {
    let disc = discretize(model, space, grid_n)?;
    let moments = grid_moments(degree, &disc.nodes, &disc.costs);
    let domain = (0.0, 1.0);
    let (upper, upper_value) = polyfit::fit_one_sided(
        degree,
        domain,
        &disc.nodes,
        &disc.targets,
        &moments,
        Side::Upper,
    )?;
    let (lower, lower_value) = polyfit::fit_one_sided(
        degree,
        domain,
        &disc.nodes,
        &disc.targets,
        &moments,
        Side::Lower,
    )?;
    Ok(OracleResult {
        lower,
        upper: Some(upper),
        value: upper_value - lower_value,
        grid_n: disc.nodes.len(),
        p: 1.0,
    })
}

/// Smallest weighted absolute error achievable on the grid by a single
/// polynomial of the given degree.
pub fn best_twosided(
    model: &FunctionModel,
    degree: usize,
    space: &WeightedSpace,
    grid_n: usize,
) -> Result<OracleResult> {
    let disc = discretize(model, space, grid_n)?;
    let (poly, value) =
        polyfit::fit_l1(degree, (0.0, 1.0), &disc.nodes, &disc.targets, &disc.costs)?;
    Ok(OracleResult { lower: poly, upper: None, value, grid_n: disc.nodes.len(), p: 1.0 })
}
