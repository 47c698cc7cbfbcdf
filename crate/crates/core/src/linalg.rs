//! Exact linear algebra: rational Gaussian elimination and fraction-free
//! (Bareiss) determinants of polynomial matrices.

use std::time::Instant;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("computation exceeded its time budget")]
    BudgetExceeded,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("inexact division during fraction-free elimination")]
    InexactPivot,
}

/// Optional wall-clock limit checked between elimination steps.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(pub Option<Instant>);

impl Deadline {
    pub fn none() -> Deadline {
        Deadline(None)
    }

    pub fn check(&self) -> Result<(), LinalgError> {
        match self.0 {
            Some(t) if Instant::now() > t => Err(LinalgError::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// Dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> RatMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Rational> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix");
        RatMatrix { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn replace_column(&mut self, j: usize, col: &[Rational]) {
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    /// Row echelon form in place; returns the pivot columns and the sign of the
    /// row permutation applied.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut negated = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                negated = !negated;
            }
            let piv = self.get(r, c).clone();
            for i in r + 1..self.rows {
                if self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c) / &piv;
                for j in c..self.cols {
                    let v = self.get(i, j) - &factor * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, negated)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let (pivots, negated) = m.echelon();
        if pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let mut det = Rational::one();
        for i in 0..self.rows {
            det *= m.get(i, i);
        }
        Ok(if negated { -det } else { det })
    }

    /// Unique solution of `self * v = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, rhs[i].clone());
        }
        let (pivots, _) = aug.echelon();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut s = aug.get(i, n).clone();
            for j in i + 1..n {
                s -= aug.get(i, j) * &x[j];
            }
            x[i] = s / aug.get(i, i);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.rows;
        let mut inv = RatMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            let col = self.solve(&e)?;
            inv.replace_column(j, &col);
        }
        Some(inv)
    }

    /// Rows reordered so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> RatMatrix {
        let rows = perm.iter().map(|&p| self.row(p).to_vec()).collect();
        RatMatrix::from_rows(rows)
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Dense matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn select_columns(&self, cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn replace_column(&mut self, j: usize, col: &[Poly]) {
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    /// Maps every entry through `f`, e.g. to evaluate at a rational point.
    pub fn map_to_rational(&self, mut f: impl FnMut(&Poly) -> Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    /// Determinant by fraction-free elimination. Pivots are chosen among the
    /// remaining submatrix by smallest term count.
    pub fn determinant(&self, deadline: Deadline) -> Result<Poly, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut m = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut negated = false;
        let mut prev = Poly::one();
        for k in 0..n {
            deadline.check()?;
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    let len = m[idx(i, j)].len();
                    if len > 0 && best.is_none_or(|b| len < b.2) {
                        best = Some((i, j, len));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Ok(Poly::zero());
            };
            if pi != k {
                for j in 0..n {
                    m.swap(idx(pi, j), idx(k, j));
                }
                negated = !negated;
            }
            if pj != k {
                for i in 0..n {
                    m.swap(idx(i, pj), idx(i, k));
                }
                negated = !negated;
            }
            if k == n - 1 {
                break;
            }
            let pivot = m[idx(k, k)].clone();
            for i in k + 1..n {
                deadline.check()?;
                let lead = m[idx(i, k)].clone();
                for j in k + 1..n {
                    let mut v = &pivot * &m[idx(i, j)];
                    if !lead.is_zero() && !m[idx(k, j)].is_zero() {
                        v -= &lead * &m[idx(k, j)];
                    }
                    m[idx(i, j)] = if prev.is_one_poly() {
                        v
                    } else {
                        v.divide_exact(&prev).map_err(|_| LinalgError::InexactPivot)?
                    };
                }
                m[idx(i, k)] = Poly::zero();
            }
            prev = pivot;
        }
        let det = m[idx(n - 1, n - 1)].clone();
        Ok(if negated { -det } else { det })
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}
