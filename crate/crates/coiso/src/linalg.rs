//! Dense exact linear algebra over the rationals: rank, nullspace, solving,
//! span membership. Sizes here are tiny (≤ a few dozen), so plain fraction
//! arithmetic with full reduction is fine.

use crate::BigRat;
use num::{One, Zero};

pub type Vector = Vec<BigRat>;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vector>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![BigRat::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vector>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        assert!(data.iter().all(|r| r.len() == cols));
        Matrix { rows, cols, data }
    }

    pub fn from_columns(cols: &[Vector]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        let mut m = Matrix::new(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, v) in col.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = self.data[row][col].clone();
            for x in self.data[row].iter_mut() {
                *x = &*x / &inv;
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let f = self.data[r][col].clone();
                    for c in 0..self.cols {
                        let sub = &f * &self.data[row][c];
                        self.data[r][c] = &self.data[r][c] - sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, in the canonical rref parametrization
    /// (deterministic for fixed input).
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![BigRat::zero(); self.cols];
                v[fc] = BigRat::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.data[r][fc].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b`; `None` when inconsistent. Free variables are set to 0.
    pub fn solve(&self, b: &[BigRat]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::new(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRat::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.data[r][self.cols].clone();
        }
        Some(x)
    }
}

/// Rank of the span of a list of vectors.
pub fn span_rank(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vector], v: &Vector) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let r = span_rank(basis);
    let mut all = basis.to_vec();
    all.push(v.clone());
    span_rank(&all) == r
}

/// `dim(span(a) ∩ span(b)) = dim a + dim b − dim(a + b)`.
pub fn intersection_dim(a: &[Vector], b: &[Vector]) -> usize {
    let da = span_rank(a);
    let db = span_rank(b);
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    da + db - span_rank(&all)
}

pub fn big(n: i64) -> BigRat {
    BigRat::from_integer(n.into())
}
