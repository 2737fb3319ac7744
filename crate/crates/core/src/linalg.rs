//! Small sparse/dense complex linear algebra used by the master-equation
//! integrator. Dimensions here are at most a few hundred, so a row-list
//! sparse format and `nalgebra` dense matrices are all that is needed.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major sparse complex matrix.
#[derive(Clone, PartialEq)]
pub struct SparseOp {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

impl fmt::Debug for SparseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseOp({}x{}, nnz={})", self.nrows, self.ncols, self.nnz())
    }
}

impl SparseOp {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut op = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            op.add_entry(i, i, *v);
        }
        op
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    /// Adds `v` to entry (i, j), merging with an existing entry.
    pub fn add_entry(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.nrows && j < self.ncols, "entry ({i},{j}) out of range");
        if v == C64::new(0.0, 0.0) {
            return;
        }
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(col, _)| *col == j) {
            Some((_, existing)) => *existing += v,
            None => row.push((j, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[i]
            .iter()
            .find(|(col, _)| *col == j)
            .map(|(_, v)| *v)
            .unwrap_or_default()
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect())
            .collect();
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn add(&self, other: &SparseOp) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for (i, r) in other.rows.iter().enumerate() {
            for (j, v) in r {
                out.add_entry(i, *j, *v);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.ncols, self.nrows);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                out.add_entry(*j, i, v.conj());
            }
        }
        out
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &SparseOp) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r {
                for (j, b) in &other.rows[*k] {
                    out.add_entry(i, *j, a * b);
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SparseOp) -> Self {
        let mut out = Self::zeros(self.nrows * other.nrows, self.ncols * other.ncols);
        for (i1, r1) in self.rows.iter().enumerate() {
            for (j1, a) in r1 {
                for (i2, r2) in other.rows.iter().enumerate() {
                    for (j2, b) in r2 {
                        out.add_entry(i1 * other.nrows + i2, j1 * other.ncols + j2, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                m[(i, *j)] += *v;
            }
        }
        m
    }

    /// `out += s * self * m`
    pub fn left_mul_acc(&self, s: C64, m: &CMatrix, out: &mut CMatrix) {
        debug_assert_eq!(self.ncols, m.nrows());
        let ncols = m.ncols();
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r {
                let a = a * s;
                for j in 0..ncols {
                    out[(i, j)] += a * m[(*k, j)];
                }
            }
        }
    }

    /// `out += s * m * self^†`
    pub fn right_mul_adjoint_acc(&self, s: C64, m: &CMatrix, out: &mut CMatrix) {
        debug_assert_eq!(self.ncols, m.ncols());
        let nrows = m.nrows();
        for (k, r) in self.rows.iter().enumerate() {
            for (j, a) in r {
                let a = a.conj() * s;
                for i in 0..nrows {
                    out[(i, k)] += m[(i, *j)] * a;
                }
            }
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| r.iter().map(|(j, a)| a * v[*j]).sum())
            .collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.nrows == self.ncols && {
            let d = self.to_dense();
            (&d - d.adjoint()).iter().all(|z| z.norm() <= tol)
        }
    }
}

pub type Coefficient = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Operator of the form `H0 + Σ_k c_k(t) H_k`.
#[derive(Clone)]
pub struct DrivenOperator {
    pub fixed: SparseOp,
    pub driven: Vec<(SparseOp, Coefficient)>,
}

impl DrivenOperator {
    pub fn constant(op: SparseOp) -> Self {
        Self {
            fixed: op,
            driven: Vec::new(),
        }
    }

    pub fn with_drive(mut self, op: SparseOp, coefficient: Coefficient) -> Self {
        assert_eq!((op.nrows(), op.ncols()), (self.fixed.nrows(), self.fixed.ncols()));
        self.driven.push((op, coefficient));
        self
    }

    pub fn dim(&self) -> usize {
        self.fixed.nrows()
    }

    pub fn at(&self, t: f64) -> SparseOp {
        self.driven
            .iter()
            .fold(self.fixed.clone(), |acc, (op, coef)| acc.add(&op.scale(coef(t))))
    }

    pub fn left_mul_acc(&self, t: f64, s: C64, m: &CMatrix, out: &mut CMatrix) {
        self.fixed.left_mul_acc(s, m, out);
        for (op, coef) in &self.driven {
            op.left_mul_acc(s * coef(t), m, out);
        }
    }

    pub fn right_mul_adjoint_acc(&self, t: f64, s: C64, m: &CMatrix, out: &mut CMatrix) {
        self.fixed.right_mul_adjoint_acc(s, m, out);
        for (op, coef) in &self.driven {
            // m (c H)^† = conj(c) m H^†
            op.right_mul_adjoint_acc(s * coef(t).conj(), m, out);
        }
    }
}

/// Eigenvalues of a Hermitian matrix (ascending).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
