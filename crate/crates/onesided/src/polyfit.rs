//! Grid-constrained polynomial fits, expressed as small LPs.
//!
//! All fits share one trick: the polynomial coefficients are recovered as
//! (negated) row duals of an equality-form LP over grid multipliers, which
//! keeps every solver variable sign- or box-constrained.

use crate::poly::Polynomial;
use crate::simplex::{self, LinearProgram, LpOutcome};
use crate::{Error, Result, Side};

/// Chebyshev basis rows: entry `[j][m]` is `T_j` at `nodes[m]` mapped into
/// the reference interval.
pub(crate) fn basis_matrix(degree: usize, domain: (f64, f64), nodes: &[f64]) -> Vec<Vec<f64>> {
    let (a, b) = domain;
    let mut rows = vec![vec![0.0; nodes.len()]; degree + 1];
    for (m, &x) in nodes.iter().enumerate() {
        let u = (2.0 * x - (a + b)) / (b - a);
        let mut prev = 1.0;
        let mut cur = u;
        rows[0][m] = 1.0;
        if degree >= 1 {
            rows[1][m] = u;
        }
        for row in rows.iter_mut().take(degree + 1).skip(2) {
            let next = 2.0 * u * cur - prev;
            row[m] = next;
            prev = cur;
            cur = next;
        }
    }
    rows
}

fn check_inputs(degree: usize, nodes: &[f64], targets: &[f64], moments: &[f64]) -> Result<()> {
    if nodes.len() != targets.len() {
        return Err(Error::InvalidArgument("node/target count mismatch".into()));
    }
    if moments.len() != degree + 1 {
        return Err(Error::InvalidArgument("moment count must be degree + 1".into()));
    }
    if nodes.len() < degree + 1 {
        return Err(Error::InvalidArgument("need at least degree + 1 nodes".into()));
    }
    if targets.iter().chain(moments).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { x: f64::NAN });
    }
    Ok(())
}

/// Cheapest polynomial pinned to one side of the targets on the grid.
///
/// `Side::Upper` minimizes the moment functional over polynomials `>=`
/// targets at every node; `Side::Lower` maximizes it over polynomials `<=`
/// targets. `moments[j]` must be the functional applied to the `j`-th basis
/// element. Returns the polynomial and the recomputed functional value.
pub(crate) fn fit_one_sided(
    degree: usize,
    domain: (f64, f64),
    nodes: &[f64],
    targets: &[f64],
    moments: &[f64],
    side: Side,
) -> Result<(Polynomial, f64)> {
    check_inputs(degree, nodes, targets, moments)?;
    let basis = basis_matrix(degree, domain, nodes);
    let signed_targets: Vec<f64> = match side {
        Side::Upper => targets.iter().map(|t| -t).collect(),
        Side::Lower => targets.to_vec(),
    };
    let lp = LinearProgram {
        objective: signed_targets,
        rows: basis,
        rhs: moments.to_vec(),
        upper: vec![f64::INFINITY; nodes.len()],
    };
    let solution = match simplex::solve(&lp)? {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => {
            return Err(Error::LinearProgram(
                "moment functional is not representable on the grid".into(),
            ))
        }
        LpOutcome::Unbounded => {
            return Err(Error::LinearProgram("one-sided fit is unbounded".into()))
        }
    };
    let coeffs: Vec<f64> = match side {
        Side::Upper => solution.row_duals.iter().map(|d| -d).collect(),
        Side::Lower => solution.row_duals.clone(),
    };
    let value = coeffs.iter().zip(moments).map(|(c, m)| c * m).sum();
    Ok((Polynomial::new(coeffs, domain)?, value))
}

/// Best weighted-l1 fit on the grid: minimizes
/// `sum_m costs[m] * |targets[m] - P(nodes[m])|` over degree-`degree`
/// polynomials. Returns the polynomial and the achieved sum.
pub(crate) fn fit_l1(
    degree: usize,
    domain: (f64, f64),
    nodes: &[f64],
    targets: &[f64],
    costs: &[f64],
) -> Result<(Polynomial, f64)> {
    if costs.len() != nodes.len() {
        return Err(Error::InvalidArgument("node/cost count mismatch".into()));
    }
    if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::InvalidArgument("costs must be finite and nonnegative".into()));
    }
    let moments = vec![0.0; degree + 1];
    check_inputs(degree, nodes, targets, &moments)?;
    let basis = basis_matrix(degree, domain, nodes);
    // Dual multipliers mu in [-c, c] with zero basis moments; shift to
    // lambda = mu + c so the solver sees box bounds [0, 2c].
    let rhs: Vec<f64> = basis
        .iter()
        .map(|row| row.iter().zip(costs).map(|(t, c)| t * c).sum())
        .collect();
    let lp = LinearProgram {
        objective: targets.iter().map(|t| -t).collect(),
        rows: basis,
        rhs,
        upper: costs.iter().map(|c| 2.0 * c).collect(),
    };
    let solution = match simplex::solve(&lp)? {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => {
            return Err(Error::LinearProgram("l1 fit multipliers are infeasible".into()))
        }
        LpOutcome::Unbounded => {
            return Err(Error::LinearProgram("l1 fit is unbounded".into()))
        }
    };
    let coeffs: Vec<f64> = solution.row_duals.iter().map(|d| -d).collect();
    let poly = Polynomial::new(coeffs, domain)?;
    let mut value = 0.0;
    for ((&x, &t), &c) in nodes.iter().zip(targets).zip(costs) {
        value += c * (t - poly.eval(x)?).abs();
    }
    Ok((poly, value))
}
