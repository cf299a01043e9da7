//! Dense phase-one simplex for small linear feasibility problems.
//!
//! The problems solved here have a handful of rows (one per state plus one)
//! and at most a few dozen columns, so a dense tableau with Bland's
//! anti-cycling rule is both fast and predictable.

use crate::error::{Error, Result};

/// Row sense of a linear constraint `coeffs · x (≤|≥|=) rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Find `x ≥ 0` satisfying every constraint. No objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFeasibility {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

/// Result of a feasibility solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub feasible: bool,
    /// A point satisfying the constraints, when feasible and the backend provides one.
    pub witness: Option<Vec<f64>>,
}

/// The seam behind which any LP backend can sit.
pub trait FeasibilitySolver: Send + Sync {
    /// `tol` is the largest total constraint violation still accepted as feasible.
    fn solve(&self, problem: &LinearFeasibility, tol: f64) -> Result<LpOutcome>;
}

/// Two-phase (phase one only) dense tableau simplex with Bland's rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct DenseSimplex;

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;

impl FeasibilitySolver for DenseSimplex {
    fn solve(&self, problem: &LinearFeasibility, tol: f64) -> Result<LpOutcome> {
        phase_one(problem, tol)
    }
}

struct Tableau {
    rows: usize,
    cols: usize, // excluding rhs
    data: Vec<f64>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn row_mut(&mut self, r: usize) -> &mut [f64] {
        let w = self.cols + 1;
        &mut self.data[r * w..(r + 1) * w]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.at(pr, pc);
        for x in self.row_mut(pr) {
            *x /= p;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for (x, p) in self.row_mut(r).iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
                // exact zero in the pivot column keeps later ratio tests clean
                self.data[r * w + pc] = 0.0;
            }
        }
    }
}

fn phase_one(problem: &LinearFeasibility, tol: f64) -> Result<LpOutcome> {
    let n = problem.num_vars;
    let m = problem.constraints.len();
    for c in &problem.constraints {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.coeffs.len() });
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Solver("non-finite constraint data".into()));
        }
    }
    if m == 0 {
        return Ok(LpOutcome { feasible: true, witness: Some(vec![0.0; n]) });
    }

    // Normalize rows: unit max-norm, nonnegative right-hand side.
    let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(m);
    for c in &problem.constraints {
        let scale = c.coeffs.iter().chain(std::iter::once(&c.rhs)).fold(0.0f64, |a, x| a.max(x.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let mut coeffs: Vec<f64> = c.coeffs.iter().map(|x| x / scale).collect();
        let mut rhs = c.rhs / scale;
        let mut sense = c.sense;
        if rhs < 0.0 {
            coeffs.iter_mut().for_each(|x| *x = -*x);
            rhs = -rhs;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        rows.push((coeffs, sense, rhs));
    }

    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = n + n_slack + n_art;
    let art_start = n + n_slack;
    let mut t = Tableau { rows: m + 1, cols, data: vec![0.0; (m + 1) * (cols + 1)] };
    let mut basis = vec![0usize; m];
    let (mut next_slack, mut next_art) = (n, art_start);
    for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        let row = t.row_mut(i);
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match sense {
            Sense::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }
    // Objective row: reduced costs of "minimize sum of artificials".
    for (i, &b) in basis.iter().enumerate().take(m) {
        if b >= art_start {
            for c in 0..=cols {
                let v = t.at(i, c);
                t.row_mut(m)[c] -= v;
            }
        }
    }
    for c in art_start..cols {
        t.row_mut(m)[c] = 0.0;
    }

    let max_iter = 50 * (m + cols) + 100;
    let mut iter = 0;
    // Bland: smallest column index with negative reduced cost.
    while let Some(pc) = (0..cols).find(|&c| t.at(m, c) < -COST_EPS) {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..m {
            let a = t.at(r, pc);
            if a > PIVOT_EPS {
                let ratio = t.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - 1e-15 || (ratio <= bratio + 1e-15 && basis[r] < basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
        }
        let Some((pr, _)) = best else {
            // phase one objective is bounded below by zero
            return Err(Error::Solver("unbounded phase-one direction".into()));
        };
        t.pivot(pr, pc);
        basis[pr] = pc;
        iter += 1;
        if iter > max_iter {
            return Err(Error::Solver(format!("iteration limit of {max_iter} reached")));
        }
    }

    let infeasibility = -t.rhs(m);
    if !infeasibility.is_finite() {
        return Err(Error::Solver("numerical breakdown".into()));
    }
    if infeasibility > tol {
        return Ok(LpOutcome { feasible: false, witness: None });
    }
    let mut x = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(r).max(0.0);
        }
    }
    Ok(LpOutcome { feasible: true, witness: Some(x) })
}
