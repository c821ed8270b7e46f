//! Dense exact-rational matrices: products, rank and reduced column echelon
//! form.
//!
//! Everything is exact. Integral operands take an `i128` fast path with
//! overflow checks that falls back to arbitrary precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Reduced column echelon form `C = M·U` with `U` invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonResult {
    pub matrix: RationalMatrix,
    pub rank: usize,
    /// Row index of the unit entry of each pivot column, strictly increasing.
    pub pivot_rows: Vec<usize>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            let row: Vec<String> = self.row(r).iter().take(12).map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        Self::from_fn(rows, cols, |r, c| BigRational::from_integer(f(r, c).into()))
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Unsupported("ragged rows".into()));
        }
        Ok(Self::from_i64(rows.len(), cols, |r, c| rows[r][c]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let cols = self.cols + other.cols;
        Ok(Self::from_fn(self.rows, cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }

    /// Appends an all-ones column.
    pub fn with_ones_column(&self) -> Self {
        let ones = Self::from_i64(self.rows, 1, |_, _| 1);
        self.hstack(&ones).expect("row counts agree")
    }

    /// `self - λ·I` for square matrices.
    pub fn minus_scalar_identity(&self, lambda: &BigRational) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(self.rows, self.cols, self.cols, self.rows));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let k = i * self.cols + i;
            m.data[k] = &m.data[k] - lambda;
        }
        Ok(m)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| q * s).collect(),
        }
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Integer entries as `i64`, if every entry is an integer that fits.
    fn small_integers(&self) -> Option<Vec<i64>> {
        self.data
            .iter()
            .map(|q| if q.is_integer() { q.numer().to_i64() } else { None })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        if let (Some(a), Some(b)) = (self.small_integers(), other.small_integers()) {
            if let Some(m) = int_matmul(&a, &b, self.rows, self.cols, other.cols) {
                return Ok(m);
            }
        }
        let (k, p) = (self.cols, other.cols);
        let data: Vec<BigRational> = (0..self.rows)
            .into_par_iter()
            .flat_map_iter(|r| {
                let row = self.row(r);
                (0..p).map(move |c| {
                    let mut acc = BigRational::zero();
                    for (i, a) in row.iter().enumerate().take(k) {
                        if a.is_zero() {
                            continue;
                        }
                        let b = other.get(i, c);
                        if !b.is_zero() {
                            acc += a * b;
                        }
                    }
                    acc
                })
            })
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: p,
            data,
        })
    }

    /// Rank over ℚ.
    ///
    /// Strongly rectangular matrices are reduced to their (smaller) Gram
    /// matrix first: over an ordered field `rank(M) = rank(MᵀM) = rank(MMᵀ)`.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows > 2 * self.cols {
            let t = self.transpose();
            return t.matmul(self).expect("conformable").eliminate_rank();
        }
        if self.cols > 2 * self.rows {
            let t = self.transpose();
            return self.matmul(&t).expect("conformable").eliminate_rank();
        }
        self.eliminate_rank()
    }

    fn eliminate_rank(&self) -> usize {
        let mut rows: Vec<Vec<BigRational>> =
            (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            let inv = pivot[c].recip();
            tail.par_iter_mut().for_each(|row| {
                if !row[c].is_zero() {
                    let f = &row[c] * &inv;
                    eliminate(row, pivot, &f, c);
                }
            });
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Reduced column echelon form, pivoting on the first nonzero entry in
    /// row order. Canonical for a given column space.
    pub fn rcef(&self) -> EchelonResult {
        // Row-reduce the transpose: its pivot columns are our pivot rows.
        let mut rows: Vec<Vec<BigRational>> = (0..self.cols).map(|c| self.column(c)).collect();
        let mut pivot_rows = Vec::new();
        for c in 0..self.rows {
            let rank = pivot_rows.len();
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][c].recip();
            for q in rows[rank][c..].iter_mut() {
                if !q.is_zero() {
                    *q *= &inv;
                }
            }
            let pivot = rows[rank].clone();
            rows.par_iter_mut().enumerate().for_each(|(i, row)| {
                if i != rank && !row[c].is_zero() {
                    let f = row[c].clone();
                    eliminate(row, &pivot, &f, c);
                }
            });
            pivot_rows.push(c);
        }
        let rank = pivot_rows.len();
        let matrix = Self::from_fn(self.rows, self.cols, |r, c| rows[c][r].clone());
        EchelonResult {
            matrix,
            rank,
            pivot_rows,
        }
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, q| {
            let d = q.denom();
            if d.is_one() {
                acc
            } else {
                num_integer::lcm(acc, d.clone())
            }
        })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigRational {
        self.data
            .iter()
            .map(|q| q.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// `row[c..] -= f * pivot[c..]`.
fn eliminate(row: &mut [BigRational], pivot: &[BigRational], f: &BigRational, c: usize) {
    for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
        if !p.is_zero() {
            *x -= f * p;
        }
    }
}

fn int_matmul(a: &[i64], b: &[i64], n: usize, k: usize, p: usize) -> Option<RationalMatrix> {
    let out: Option<Vec<i128>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|r| {
            let row = &a[r * k..(r + 1) * k];
            (0..p).map(move |c| {
                let mut acc: i128 = 0;
                for (i, &x) in row.iter().enumerate() {
                    if x != 0 {
                        let y = b[i * p + c];
                        acc = acc.checked_add(i128::from(x).checked_mul(i128::from(y))?)?;
                    }
                }
                Some(acc)
            })
        })
        .collect();
    let out = out?;
    Some(RationalMatrix {
        rows: n,
        cols: p,
        data: out
            .into_iter()
            .map(|v| BigRational::from_integer(BigInt::from(v)))
            .collect(),
    })
}
