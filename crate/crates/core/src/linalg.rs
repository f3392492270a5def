//! Exact dense linear algebra over a field, using fraction-free elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::symbolic::{Rational, RationalPoint, ScalarExpr, SymbolicError};

/// The scalar operations elimination needs.
pub trait Field: Clone + PartialEq + fmt::Display + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Rough size used to prefer simple pivots.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Add::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Sub::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Mul::mul(self, rhs)
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        Neg::neg(self)
    }
}

impl Field for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::one()
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.numerator().num_terms() + self.denominator().num_terms()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type ExprMatrix = Matrix<ScalarExpr>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|x| x.neg())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Field, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j).add(self.get(j, i)).is_zero())
            })
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.rows, rhs.rows, "row count mismatch");
        let mut out = Matrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Rows `r0..r1`.
    pub fn row_block(&self, r0: usize, r1: usize) -> Matrix<T> {
        Matrix {
            rows: r1 - r0,
            cols: self.cols,
            data: self.data[r0 * self.cols..r1 * self.cols].to_vec(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<T> {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    /// Fraction-free row echelon form.
    pub fn echelon(&self) -> Echelon<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = T::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot_row = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).weight());
            let Some(p) = pivot_row else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let pv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let a = m.get(i, c).clone();
                for j in c + 1..m.cols {
                    let lhs = pv.mul(m.get(i, j));
                    let rhs = if a.is_zero() {
                        T::zero()
                    } else {
                        a.mul(m.get(r, j))
                    };
                    let v = lhs.sub(&rhs);
                    let v = if v.is_zero() { v } else { v.div(&prev) };
                    m.set(i, j, v);
                }
                m.set(i, c, T::zero());
            }
            prev = pv;
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        // Track row swaps with an explicit elimination to keep the sign.
        let mut m = self.clone();
        let mut sign_neg = false;
        let mut prev = T::one();
        for k in 0..n {
            let p = (k..n)
                .filter(|&i| !m.get(i, k).is_zero())
                .min_by_key(|&i| m.get(i, k).weight());
            let Some(p) = p else { return T::zero() };
            if p != k {
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                sign_neg = !sign_neg;
            }
            let pv = m.get(k, k).clone();
            for i in k + 1..n {
                let a = m.get(i, k).clone();
                for j in k + 1..n {
                    let v = pv.mul(m.get(i, j)).sub(&a.mul(m.get(k, j)));
                    let v = if v.is_zero() { v } else { v.div(&prev) };
                    m.set(i, j, v);
                }
                m.set(i, k, T::zero());
            }
            prev = pv;
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign_neg {
            d.neg()
        } else {
            d
        }
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        self.echelon().kernel()
    }

    /// Solves `self * x = b`. Returns a particular solution, or `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let aug = self.hcat(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols + 1];
        x[self.cols] = T::one().neg();
        e.back_substitute(&mut x);
        x.truncate(self.cols);
        Some(x)
    }
}

/// Result of fraction-free elimination.
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Field> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Fills pivot coordinates of `x` so that the echelon rows vanish on it;
    /// free coordinates are taken as given.
    fn back_substitute(&self, x: &mut [T]) {
        let m = &self.matrix;
        for (r, &p) in self.pivots.iter().enumerate().rev() {
            let mut acc = T::zero();
            for j in p + 1..m.cols {
                let a = m.get(r, j);
                if !a.is_zero() && !x[j].is_zero() {
                    acc = acc.add(&a.mul(&x[j]));
                }
            }
            x[p] = if acc.is_zero() {
                T::zero()
            } else {
                acc.neg().div(m.get(r, p))
            };
        }
    }

    pub fn kernel(&self) -> Vec<Vec<T>> {
        let n = self.matrix.cols;
        let mut out = Vec::new();
        for f in 0..n {
            if self.pivots.contains(&f) {
                continue;
            }
            let mut x = vec![T::zero(); n];
            x[f] = T::one();
            self.back_substitute(&mut x);
            out.push(x);
        }
        out
    }
}

impl ExprMatrix {
    pub fn evaluate(&self, p: &RationalPoint) -> Result<QMatrix, SymbolicError> {
        self.try_map(|e| e.evaluate(p))
    }
}

impl QMatrix {
    pub fn to_expr(&self) -> ExprMatrix {
        self.map(|q| ScalarExpr::constant(q.clone()))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        f.write_str("]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn q(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Field::is_zero));
    }

    #[test]
    fn determinant_with_swap() {
        let m = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), rat(-1));
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant(), rat(18));
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = q(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[rat(3), rat(1)]), Some(vec![rat(2), rat(1)]));
        let m = q(&[&[1, 1], &[2, 2]]);
        assert_eq!(m.solve(&[rat(1), rat(3)]), None);
    }

    #[test]
    fn symbolic_rank_drops_only_generically() {
        let x = ScalarExpr::var("x");
        let m = Matrix::from_rows(vec![
            vec![x.clone(), ScalarExpr::one()],
            vec![ScalarExpr::zero(), x.clone()],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant(), x.pow(2));
    }
}
