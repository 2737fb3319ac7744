//! Dense two-phase simplex for min c·x s.t. A x = b, x ≥ 0, with Bland's
//! rule against cycling.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Indices of the basic variables (may include zero-valued ones).
    pub basis: Vec<usize>,
    /// Constraint rows dropped as linearly dependent.
    pub dropped_rows: Vec<usize>,
}

struct Tableau {
    /// rows × (cols + 1); the last column is the right-hand side.
    t: DMatrix<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.t.nrows()
    }

    fn rhs_col(&self) -> usize {
        self.t.ncols() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[(r, c)];
        let ncols = self.t.ncols();
        for j in 0..ncols {
            self.t[(r, j)] /= p;
        }
        for i in 0..self.rows() {
            if i != r {
                let f = self.t[(i, c)];
                if f != 0.0 {
                    for j in 0..ncols {
                        let v = self.t[(r, j)];
                        self.t[(i, j)] -= f * v;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` (over the first `n` columns) for the current basis.
    fn reduced_costs(&self, cost: &[f64], n: usize) -> Vec<f64> {
        let mut d = cost[..n].to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.t[(i, j)];
                }
            }
        }
        d
    }

    /// Runs simplex iterations on columns `0..n` until optimal.
    fn optimize(&mut self, cost: &[f64], n: usize) -> Result<()> {
        let rhs = self.rhs_col();
        let scale = cost.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        loop {
            let d = self.reduced_costs(cost, n);
            // Bland: lowest-index entering column with negative reduced cost.
            let Some(enter) = (0..n).find(|&j| d[j] < -PIVOT_TOL * scale) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows() {
                let a = self.t[(i, enter)];
                if a > PIVOT_TOL {
                    let ratio = self.t[(i, rhs)] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-12 * best.abs().max(1.0) || (ratio <= best + 1e-12 * best.abs().max(1.0) && self.basis[i] < self.basis[k]) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Err(Error::LpUnbounded),
            }
        }
    }
}

/// Solves min c·x s.t. A x = b, x ≥ 0. Rows found to be linearly dependent
/// are dropped after checking their consistency.
pub fn simplex_solve(a_eq: &DMatrix<f64>, rhs: &[f64], cost: &[f64]) -> Result<LpSolution> {
    let (m, n) = (a_eq.nrows(), a_eq.ncols());
    if rhs.len() != m || cost.len() != n {
        return Err(Error::ShapeMismatch(format!("LP with A {m}x{n}, b {}, c {}", rhs.len(), cost.len())));
    }
    // Phase 1: artificials n..n+m on rows with b ≥ 0.
    let width = n + m + 1;
    let mut t = DMatrix::zeros(m, width);
    for i in 0..m {
        let s = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = s * a_eq[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, width - 1)] = s * rhs[i];
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect() };
    let mut phase1 = vec![0.0; n + m];
    phase1[n..].iter_mut().for_each(|c| *c = 1.0);
    tab.optimize(&phase1, n + m)?;
    let rhs_col = width - 1;
    let bscale = rhs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let infeas: f64 = tab.basis.iter().enumerate().filter(|(_, &b)| b >= n).map(|(i, _)| tab.t[(i, rhs_col)]).sum();
    if infeas > FEAS_TOL * bscale {
        return Err(Error::LpInfeasible);
    }
    // Drive remaining (zero-level) artificials out; rows where that is
    // impossible are redundant.
    let mut dropped = Vec::new();
    let mut r = 0;
    while r < tab.rows() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.t[(r, j)].abs() > 1e-9) {
                Some(j) => tab.pivot(r, j),
                None => {
                    dropped.push(tab.basis[r] - n);
                    tab.t = tab.t.clone().remove_row(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    // Phase 2 on the original columns only.
    let mut full_cost = cost.to_vec();
    full_cost.extend(std::iter::repeat_n(0.0, m));
    tab.optimize(&full_cost, n)?;
    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        x[b] = tab.t[(i, rhs_col)].max(0.0);
    }
    let objective = x.iter().zip(cost).map(|(a, b)| a * b).sum();
    dropped.sort_unstable();
    Ok(LpSolution {
        x,
        objective,
        basis: tab.basis,
        dropped_rows: dropped,
    })
}
