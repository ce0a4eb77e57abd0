use std::fmt;

use super::poly::Poly;
use super::ratexpr::RatExpr;
use crate::error::{Error, Result};

/// Dense row-major matrix of rational functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RatExpr>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![RatExpr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = RatExpr::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[RatExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&RatExpr) -> Result<RatExpr>) -> Result<Matrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = super::ratexpr::Frac::zero();
                for k in 0..self.cols {
                    let a = &self[(i, k)];
                    let b = &other[(k, j)];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc.add_expr(&(a * b));
                }
                out[(i, j)] = acc.finish().expect("non-zero denominators");
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = RatExpr;
    fn index(&self, (i, j): (usize, usize)) -> &RatExpr {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatExpr {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} matrix", self.rows, self.cols)
    }
}

/// Rank over the field of rational functions, by fraction-free elimination
/// on rows cleared of denominators.
pub fn generic_rank(m: &Matrix) -> usize {
    let mut rows: Vec<Vec<Poly>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let mut den = Poly::one();
            for e in row {
                if !e.den().is_one() && den.div_exact(e.den()).is_none() {
                    den = den.mul(e.den());
                }
            }
            row.iter()
                .map(|e| if e.is_zero() { Poly::zero() } else { e.num().mul(&den.div_exact(e.den()).expect("den divides")) })
                .collect()
        })
        .collect();
    let ncols = m.cols();
    let mut rank = 0;
    let mut prev = Poly::one();
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].len())
        else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let (top, below) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in below {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let v = pivot.mul(&row[j]).sub(&factor.mul(&prow[j]));
                row[j] = v.div_exact(&prev).unwrap_or(v);
            }
            row[col] = Poly::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn matrix_inverse(m: &Matrix) -> Result<Matrix> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::identity(n);
    for col in 0..n {
        let p = (col..n)
            .filter(|&i| !a[(i, col)].is_zero())
            .min_by_key(|&i| (a[(i, col)].num().len() + a[(i, col)].den().len(), i))
            .ok_or(Error::SingularMatrix { column: col + 1 })?;
        if p != col {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(col, j)].clone();
                a[(col, j)] = t;
                let t = inv[(p, j)].clone();
                inv[(p, j)] = inv[(col, j)].clone();
                inv[(col, j)] = t;
            }
        }
        let pinv = a[(col, col)].inv()?;
        for j in 0..n {
            a[(col, j)] = &a[(col, j)] * &pinv;
            inv[(col, j)] = &inv[(col, j)] * &pinv;
        }
        for i in 0..n {
            if i == col || a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            for j in 0..n {
                if !a[(col, j)].is_zero() {
                    a[(i, j)] = &a[(i, j)] - &(&f * &a[(col, j)]);
                }
                if !inv[(col, j)].is_zero() {
                    inv[(i, j)] = &inv[(i, j)] - &(&f * &inv[(col, j)]);
                }
            }
        }
    }
    Ok(inv)
}
