//! A dense bounded-variable simplex solver for the crate's fitting LPs.
//!
//! Minimizes `c . x` subject to `A x = b` and `0 <= x <= u`, where entries of
//! `u` may be infinite. Problems here stay small (tens of rows, a few
//! thousand columns), so the basis inverse is kept dense and the basic values
//! are refreshed from it every iteration; the final solution and row duals
//! are recomputed from a fresh factorization of the optimal basis.

use crate::{Error, Result};

/// Feasibility tolerance on phase-1 residuals and recovered values.
const FEAS_TOL: f64 = 1e-7;
/// Reduced-cost threshold below which a column is not worth entering.
const PRICE_TOL: f64 = 1e-9;
/// Smallest pivot magnitude accepted in the ratio test.
const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    /// Objective coefficients, one per column.
    pub objective: Vec<f64>,
    /// Dense constraint rows of `A x = b`.
    pub rows: Vec<Vec<f64>>,
    /// Right-hand side, one per row.
    pub rhs: Vec<f64>,
    /// Per-column upper bounds; `f64::INFINITY` means unbounded above.
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    #[cfg_attr(not(test), allow(dead_code))]
    pub x: Vec<f64>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub objective: f64,
    /// One dual per row, signed for the caller's row orientation: for every
    /// basic column `j`, `sum_i rows[i][j] * row_duals[i] = objective[j]`.
    pub row_duals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq)]
enum Phase {
    One,
    Two,
}

enum RunEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    n_structural: usize,
    /// Column-major normalized matrix, structural columns then one artificial
    /// unit column per row.
    cols: Vec<Vec<f64>>,
    upper: Vec<f64>,
    cost1: Vec<f64>,
    cost2: Vec<f64>,
    b: Vec<f64>,
    flipped: Vec<bool>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    at_upper: Vec<bool>,
    /// Columns excluded from pricing (artificials after phase 1, fixed vars).
    sealed: Vec<bool>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
}

pub(crate) fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    validate(lp)?;
    let m = lp.rows.len();
    if m == 0 {
        return Ok(solve_unconstrained(lp));
    }
    let mut t = Tableau::new(lp);
    if let RunEnd::Unbounded = t.run(Phase::One)? {
        // The artificial objective is bounded below by zero.
        return Err(Error::LinearProgram("phase one diverged".into()));
    }
    if t.objective_value(Phase::One) > FEAS_TOL * (1.0 + t.rhs_scale()) {
        return Ok(LpOutcome::Infeasible);
    }
    t.drive_out_artificials();
    t.seal_artificials();
    match t.run(Phase::Two)? {
        RunEnd::Optimal => t.extract(lp),
        RunEnd::Unbounded => Ok(LpOutcome::Unbounded),
    }
}

fn validate(lp: &LinearProgram) -> Result<()> {
    let n = lp.objective.len();
    if lp.rows.len() != lp.rhs.len() {
        return Err(Error::InvalidArgument("row/rhs count mismatch".into()));
    }
    if lp.upper.len() != n {
        return Err(Error::InvalidArgument("upper bound count mismatch".into()));
    }
    if lp.objective.iter().any(|c| !c.is_finite()) || lp.rhs.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidArgument("non-finite objective or rhs".into()));
    }
    for row in &lp.rows {
        if row.len() != n {
            return Err(Error::InvalidArgument("row length mismatch".into()));
        }
        if row.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("non-finite constraint entry".into()));
        }
    }
    if lp.upper.iter().any(|u| u.is_nan() || *u < 0.0) {
        return Err(Error::InvalidArgument("upper bounds must be nonnegative".into()));
    }
    Ok(())
}

fn solve_unconstrained(lp: &LinearProgram) -> LpOutcome {
    let mut x = vec![0.0; lp.objective.len()];
    let mut objective = 0.0;
    for (j, &c) in lp.objective.iter().enumerate() {
        if c < 0.0 {
            if lp.upper[j].is_infinite() {
                return LpOutcome::Unbounded;
            }
            x[j] = lp.upper[j];
            objective += c * lp.upper[j];
        }
    }
    LpOutcome::Optimal(LpSolution { x, objective, row_duals: Vec::new() })
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n = lp.objective.len();
        let mut flipped = vec![false; m];
        let mut b = lp.rhs.clone();
        for (i, v) in b.iter_mut().enumerate() {
            if *v < 0.0 {
                *v = -*v;
                flipped[i] = true;
            }
        }
        let mut cols = Vec::with_capacity(n + m);
        for j in 0..n {
            let col = (0..m)
                .map(|i| if flipped[i] { -lp.rows[i][j] } else { lp.rows[i][j] })
                .collect();
            cols.push(col);
        }
        for i in 0..m {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            cols.push(e);
        }
        let mut upper = lp.upper.clone();
        upper.extend(std::iter::repeat_n(f64::INFINITY, m));
        let mut cost1 = vec![0.0; n];
        cost1.extend(std::iter::repeat_n(1.0, m));
        let mut cost2 = lp.objective.clone();
        cost2.extend(std::iter::repeat_n(0.0, m));
        let mut sealed = vec![false; n + m];
        for j in 0..n {
            // A zero upper bound fixes the variable; never price it.
            if upper[j] == 0.0 {
                sealed[j] = true;
            }
        }
        let basis: Vec<usize> = (n..n + m).collect();
        let mut in_basis = vec![false; n + m];
        for &j in &basis {
            in_basis[j] = true;
        }
        let binv = (0..m)
            .map(|i| {
                let mut row = vec![0.0; m];
                row[i] = 1.0;
                row
            })
            .collect();
        let xb = b.clone();
        Self {
            m,
            n_structural: n,
            cols,
            upper,
            cost1,
            cost2,
            b,
            flipped,
            basis,
            in_basis,
            at_upper: vec![false; n + m],
            sealed,
            binv,
            xb,
        }
    }

    fn rhs_scale(&self) -> f64 {
        self.b.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    fn cost(&self, phase: Phase) -> &[f64] {
        match phase {
            Phase::One => &self.cost1,
            Phase::Two => &self.cost2,
        }
    }

    /// Effective rhs with nonbasic-at-upper columns shifted to the left side.
    fn effective_rhs(&self) -> Vec<f64> {
        let mut rhs = self.b.clone();
        for j in 0..self.cols.len() {
            if self.at_upper[j] && !self.in_basis[j] {
                let u = self.upper[j];
                for (r, c) in rhs.iter_mut().zip(&self.cols[j]) {
                    *r -= u * c;
                }
            }
        }
        rhs
    }

    fn refresh_xb(&mut self) {
        let rhs = self.effective_rhs();
        for (xi, row) in self.xb.iter_mut().zip(&self.binv) {
            *xi = row.iter().zip(&rhs).map(|(v, r)| v * r).sum();
        }
    }

    fn objective_value(&self, phase: Phase) -> f64 {
        let cost = self.cost(phase);
        let mut acc = 0.0;
        for (&col, &value) in self.basis.iter().zip(&self.xb) {
            acc += cost[col] * value;
        }
        for (j, &cj) in cost.iter().enumerate() {
            if self.at_upper[j] && !self.in_basis[j] && self.upper[j].is_finite() {
                acc += cj * self.upper[j];
            }
        }
        acc
    }

    /// `y` with `y_k = (c_B^T B^-1)_k`.
    fn btran(&self, phase: Phase) -> Vec<f64> {
        let cost = self.cost(phase);
        let mut y = vec![0.0; self.m];
        for (k, yk) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..self.m {
                acc += cost[self.basis[i]] * self.binv[i][k];
            }
            *yk = acc;
        }
        y
    }

    /// `B^-1 * column j`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let col = &self.cols[j];
        let mut w = vec![0.0; self.m];
        for (wi, row) in w.iter_mut().zip(&self.binv) {
            *wi = row.iter().zip(col).map(|(v, c)| v * c).sum();
        }
        w
    }

    fn reduced_cost(&self, phase: Phase, y: &[f64], j: usize) -> f64 {
        let mut acc = self.cost(phase)[j];
        for (yi, c) in y.iter().zip(&self.cols[j]) {
            acc -= yi * c;
        }
        acc
    }

    fn run(&mut self, phase: Phase) -> Result<RunEnd> {
        let total = self.cols.len();
        let max_iter = 200 * (self.m + total + 10);
        let stall_limit = 2 * (self.m + total) + 20;
        let mut stall = 0usize;
        let mut last_obj = f64::INFINITY;
        for _ in 0..max_iter {
            self.refresh_xb();
            let obj = self.objective_value(phase);
            if obj < last_obj - 1e-12 * (1.0 + last_obj.abs()) {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
            }
            let bland = stall > stall_limit;

            let y = self.btran(phase);
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..total {
                if self.in_basis[j] || self.sealed[j] {
                    continue;
                }
                let d = self.reduced_cost(phase, &y, j);
                // Improvement rate: increase from lower wants d < 0,
                // decrease from upper wants d > 0.
                let gain = if self.at_upper[j] { d } else { -d };
                if gain > PRICE_TOL {
                    if bland {
                        entering = Some((j, gain));
                        break;
                    }
                    if entering.is_none_or(|(_, g)| gain > g) {
                        entering = Some((j, gain));
                    }
                }
            }
            let Some((enter, _)) = entering else {
                return Ok(RunEnd::Optimal);
            };

            // sigma: direction the entering variable moves.
            let sigma = if self.at_upper[enter] { -1.0 } else { 1.0 };
            let w = self.ftran(enter);
            // Basic value rates: d(xb_i)/dt = -sigma * w_i.
            let mut t_limit = self.upper[enter];
            let mut leaving: Option<(usize, bool)> = None;
            for i in 0..self.m {
                let rate = -sigma * w[i];
                if rate < -PIVOT_TOL {
                    let lim = (self.xb[i].max(0.0)) / (-rate);
                    if lim < t_limit - 1e-12 {
                        t_limit = lim;
                        leaving = Some((i, false));
                    } else if (lim - t_limit).abs() <= 1e-12 {
                        tie_break(&mut leaving, i, false, &w, bland, &self.basis);
                    }
                } else if rate > PIVOT_TOL {
                    let ub = self.upper[self.basis[i]];
                    if ub.is_finite() {
                        let lim = ((ub - self.xb[i]).max(0.0)) / rate;
                        if lim < t_limit - 1e-12 {
                            t_limit = lim;
                            leaving = Some((i, true));
                        } else if (lim - t_limit).abs() <= 1e-12 {
                            tie_break(&mut leaving, i, true, &w, bland, &self.basis);
                        }
                    }
                }
            }
            if t_limit.is_infinite() {
                return Ok(RunEnd::Unbounded);
            }
            match leaving {
                None => {
                    // The entering variable runs to its opposite bound.
                    self.at_upper[enter] = !self.at_upper[enter];
                }
                Some((r, to_upper)) => {
                    if w[r].abs() < PIVOT_TOL {
                        return Err(Error::LinearProgram("pivot element vanished".into()));
                    }
                    self.update_binv(&w, r);
                    let leaving_col = self.basis[r];
                    self.basis[r] = enter;
                    self.in_basis[enter] = true;
                    self.at_upper[enter] = false;
                    self.in_basis[leaving_col] = false;
                    self.at_upper[leaving_col] = to_upper && self.upper[leaving_col].is_finite();
                }
            }
        }
        Err(Error::LinearProgram("simplex iteration limit exceeded".into()))
    }

    fn update_binv(&mut self, w: &[f64], r: usize) {
        let pivot = w[r];
        for (i, &wi) in w.iter().enumerate() {
            if i == r {
                continue;
            }
            let factor = wi / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in 0..self.m {
                let adj = factor * self.binv[r][k];
                self.binv[i][k] -= adj;
            }
        }
        for v in self.binv[r].iter_mut() {
            *v /= pivot;
        }
    }

    /// Pivots basic artificials onto structural columns wherever the row has
    /// a usable entry; rows without one are redundant and keep a zero-valued
    /// artificial.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n_structural {
                continue;
            }
            let mut replacement: Option<(usize, Vec<f64>)> = None;
            for j in 0..self.n_structural {
                if self.in_basis[j] || self.sealed[j] {
                    continue;
                }
                let w = self.ftran(j);
                if w[r].abs() > 1e-8 {
                    replacement = Some((j, w));
                    break;
                }
            }
            if let Some((j, w)) = replacement {
                self.update_binv(&w, r);
                let art = self.basis[r];
                self.basis[r] = j;
                self.in_basis[j] = true;
                self.at_upper[j] = false;
                self.in_basis[art] = false;
            }
        }
    }

    fn seal_artificials(&mut self) {
        for j in self.n_structural..self.cols.len() {
            self.sealed[j] = true;
            self.upper[j] = 0.0;
            self.at_upper[j] = false;
        }
    }

    fn extract(&mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        // Fresh factorization of the optimal basis for values and duals.
        let basis_matrix: Vec<Vec<f64>> = (0..self.m)
            .map(|i| (0..self.m).map(|k| self.cols[self.basis[k]][i]).collect())
            .collect();
        let rhs = self.effective_rhs();
        let xb = solve_linear(basis_matrix.clone(), rhs)
            .ok_or_else(|| Error::LinearProgram("optimal basis is singular".into()))?;

        let n = self.n_structural;
        let mut x = vec![0.0; n];
        for (j, xj) in x.iter_mut().enumerate() {
            if self.at_upper[j] && !self.in_basis[j] {
                *xj = self.upper[j];
            }
        }
        for (i, &col) in self.basis.iter().enumerate() {
            if col < n {
                x[col] = xb[i];
            } else if xb[i].abs() > FEAS_TOL * (1.0 + self.rhs_scale()) {
                return Err(Error::LinearProgram(
                    "artificial variable stuck at a nonzero value".into(),
                ));
            }
        }
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

        // Duals: solve B^T pi = c_B, then undo the row sign normalization.
        let bt: Vec<Vec<f64>> = (0..self.m)
            .map(|i| (0..self.m).map(|k| basis_matrix[k][i]).collect())
            .collect();
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost2[j]).collect();
        let mut duals = solve_linear(bt, cb)
            .ok_or_else(|| Error::LinearProgram("optimal basis is singular".into()))?;
        for (i, d) in duals.iter_mut().enumerate() {
            if self.flipped[i] {
                *d = -*d;
            }
        }
        Ok(LpOutcome::Optimal(LpSolution { x, objective, row_duals: duals }))
    }
}

fn tie_break(
    leaving: &mut Option<(usize, bool)>,
    i: usize,
    to_upper: bool,
    w: &[f64],
    bland: bool,
    basis: &[usize],
) {
    let Some((cur, _)) = *leaving else {
        *leaving = Some((i, to_upper));
        return;
    };
    let better = if bland {
        // Anti-cycling: smallest leaving column index.
        basis[i] < basis[cur]
    } else {
        // Stability: largest pivot magnitude.
        w[i].abs() > w[cur].abs()
    };
    if better {
        *leaving = Some((i, to_upper));
    }
}

/// Gaussian elimination with partial pivoting; `None` when near-singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let mut pivot_row = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[pivot_row][col].abs() {
                pivot_row = r;
            }
        }
        if a[pivot_row][col].abs() < 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..n {
            let (head, tail) = a.split_at_mut(r);
            let pivot_row = &head[col];
            let row = &mut tail[0];
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for (rv, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *rv -= factor * pv;
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(outcome: LpOutcome) -> LpSolution {
        match outcome {
            LpOutcome::Optimal(s) => s,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn classic_two_constraint_optimum() {
        // min -x1 - 2 x2 with slacks: x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6.
        let lp = LinearProgram {
            objective: vec![-1.0, -2.0, 0.0, 0.0],
            rows: vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            rhs: vec![4.0, 6.0],
            upper: vec![f64::INFINITY; 4],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective + 5.0).abs() < 1e-9);
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn upper_bound_binds() {
        // min -x1 s.t. x1 + x2 = 3, x1 <= 2.
        let lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![3.0],
            upper: vec![2.0, f64::INFINITY],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective + 2.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_is_reported() {
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![-1.0],
            upper: vec![f64::INFINITY; 2],
        };
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn unbounded_is_reported() {
        let lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            rows: vec![vec![1.0, -1.0]],
            rhs: vec![0.0],
            upper: vec![f64::INFINITY; 2],
        };
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn duals_satisfy_the_basic_columns() {
        // min 2 x1 + 3 x2 s.t. x1 + x2 = 5: optimum x1 = 5, dual 2.
        let lp = LinearProgram {
            objective: vec![2.0, 3.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![5.0],
            upper: vec![f64::INFINITY; 2],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective - 10.0).abs() < 1e-9);
        assert!((sol.row_duals[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn flipped_rows_flip_the_dual_sign() {
        // min x1 s.t. -x1 = -3: x1 = 3, dual solves -pi = 1.
        let lp = LinearProgram {
            objective: vec![1.0],
            rows: vec![vec![-1.0]],
            rhs: vec![-3.0],
            upper: vec![f64::INFINITY],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        assert!((sol.row_duals[0] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Multiple constraints active at the optimum.
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0, 0.0, 0.0, 0.0],
            rows: vec![
                vec![1.0, 0.0, 1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0, 0.0, 1.0],
            ],
            rhs: vec![1.0, 1.0, 2.0],
            upper: vec![f64::INFINITY; 5],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective + 2.0).abs() < 1e-9);
    }

    #[test]
    fn bounded_variables_with_equalities() {
        // min -x1 - x2 s.t. x1 + x2 = 1.5, both in [0, 1].
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0],
            rows: vec![vec![1.0, 1.0]],
            rhs: vec![1.5],
            upper: vec![1.0, 1.0],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective + 1.5).abs() < 1e-9);
        assert!((sol.x[0] + sol.x[1] - 1.5).abs() < 1e-9);
        assert!(sol.x.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // Second row duplicates the first.
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            rows: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            rhs: vec![2.0, 2.0],
            upper: vec![f64::INFINITY; 2],
        };
        let sol = optimal(solve(&lp).unwrap());
        assert!((sol.objective - 2.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
    }
}
