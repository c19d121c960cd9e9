//! Dense exact matrices over a field, with echelon forms, rank, kernel and solve.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::arith::Rational;

/// Field operations needed by elimination.
///
/// Elements carry their own field (a cyclotomic number knows its conductor), so
/// constants are produced from an existing element.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
}

/// Row-major dense matrix with exact entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    zero: T,
}

impl<T: Scalar> ExactMatrix<T> {
    pub fn new(rows: usize, cols: usize, zero: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero.clone(); rows * cols],
            zero,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, zero: T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data, zero }
    }

    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize, zero: T) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Self { rows: n, cols, data, zero }
    }

    pub fn identity(n: usize, zero: T) -> Self {
        let one = zero.one_like();
        Self::from_fn(n, n, zero.clone(), |r, c| if r == c { one.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.zero.clone(), |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::new(self.rows, other.cols, self.zero.clone());
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.vanishes() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.vanishes() {
                        continue;
                    }
                    let v = out.get(r, c).plus(&a.times(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.vanishes() && !b.vanishes())
                    .fold(self.zero.clone(), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, self.zero.clone(), |r, c| self.get(r, c).minus(other.get(r, c)))
    }

    pub fn echelon(&self) -> RowEchelon<T> {
        let mut e = RowEchelon::new(self.cols, self.zero.clone());
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{v : A v = 0}` obtained from the reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        self.echelon().kernel_basis()
    }

    /// One solution of `A x = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut e = RowEchelon::new(self.cols + 1, self.zero.clone());
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r].clone());
            e.insert(row);
        }
        let rref = e.into_rref();
        if rref.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }
}

/// Incrementally built row echelon form.
///
/// Every stored row has a leading one at its pivot column and zeros in the
/// pivot columns of the rows inserted before it.
#[derive(Debug, Clone)]
pub struct RowEchelon<T> {
    cols: usize,
    zero: T,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> RowEchelon<T> {
    pub fn new(cols: usize, zero: T) -> Self {
        Self {
            cols,
            zero,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].vanishes() {
                continue;
            }
            let f = v[p].clone();
            for (j, a) in row.iter().enumerate().skip(p) {
                if !a.vanishes() {
                    v[j] = v[j].minus(&f.times(a));
                }
            }
        }
        v
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        assert_eq!(v.len(), self.cols);
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|a| !a.vanishes()) else {
            return false;
        };
        let inv = v[p].inverse();
        let v: Vec<T> = v.iter().map(|a| if a.vanishes() { a.clone() } else { a.times(&inv) }).collect();
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Fully reduced row echelon form with rows sorted by pivot column.
    pub fn into_rref(mut self) -> Rref<T> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<T>> = order.iter().map(|&i| std::mem::take(&mut self.rows[i])).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        // rows are in echelon form once sorted; clear above each pivot bottom-up
        for i in (0..rows.len()).rev() {
            let p = pivots[i];
            let (upper, lower) = rows.split_at_mut(i);
            let pivot_row = &lower[0];
            for row in upper.iter_mut() {
                if row[p].vanishes() {
                    continue;
                }
                let f = row[p].clone();
                for j in p..self.cols {
                    if !pivot_row[j].vanishes() {
                        row[j] = row[j].minus(&f.times(&pivot_row[j]));
                    }
                }
            }
        }
        Rref {
            cols: self.cols,
            zero: self.zero,
            rows,
            pivots,
        }
    }

    pub fn kernel_basis(self) -> Vec<Vec<T>> {
        self.into_rref().kernel_basis()
    }
}

/// Reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref<T> {
    cols: usize,
    zero: T,
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Rref<T> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// One kernel vector per free column, with a one in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let one = self.zero.one_like();
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.zero.clone(); self.cols];
                v[f] = one.clone();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].vanishes() {
                        v[p] = row[f].negated();
                    }
                }
                v
            })
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.rows.iter().flatten()
    }
}
