use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec;

/// Dense matrix of arbitrary-precision rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> ExactMatrix {
        ExactMatrix::from_fn(n, n, |i, j| i64::from(i == j))
    }

    /// Integer matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> ExactMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(int(f(i, j)));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rationals(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<ExactMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<ExactMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = exec::map_range(self.rows, |i| {
            (0..other.cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for t in 0..self.cols {
                        let a = self.get(i, t);
                        if !a.is_zero() {
                            acc += a * other.get(t, j);
                        }
                    }
                    acc
                })
                .collect::<Vec<_>>()
        });
        Ok(ExactMatrix { rows: self.rows, cols: other.cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn matvec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(exec::map_range(self.rows, |i| {
            self.row(i)
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        }))
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &ExactMatrix, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &BigRational) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `A - ξI`.
    pub fn shifted(&self, xi: &BigRational) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) - xi;
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(Error::NonIntegerEntry { row: i, col: j })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank. Integer matrices go through fraction-free elimination,
    /// others through rational row reduction.
    pub fn rank(&self) -> usize {
        match self.to_integer_rows() {
            Ok(rows) => bareiss_rank(rows),
            Err(_) => self.rref().1.len(),
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref_in_place(&mut m, self.cols);
        let data = m.into_iter().flatten().collect();
        (ExactMatrix { rows: self.rows, cols: self.cols, data }, pivots)
    }

    /// A solution of `self · x = b`, or `None` when `b` is outside the column
    /// space.
    pub fn solve(&self, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut m: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_in_place(&mut m, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[r][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Plain-text grid: one row per line, entries separated by spaces,
    /// rationals written as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

/// Row-reduces `m` in place over the first `cols` columns; returns pivots.
fn rref_in_place(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        exec::for_each_mut(m, |i, row| {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for j in c..row.len() {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &f * &pivot_row[j];
                    }
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of an integer matrix by Bareiss fraction-free elimination. All
/// intermediate values are minors of the input, so divisions are exact.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        exec::for_each_mut(tail, |_, row| {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        });
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Largest absolute row sum; bounds every eigenvalue in absolute value.
pub fn max_abs_row_sum(m: &ExactMatrix) -> BigRational {
    (0..m.rows())
        .map(|i| m.row(i).iter().fold(BigRational::zero(), |acc, x| acc + x.abs()))
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_and_nullity() {
        let a = ExactMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(a.nullity(), 1);
        let half = a.scale(&q(1, 2));
        assert_eq!(half.rank(), 2);
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert_eq!(ExactMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = ExactMatrix::from_rows(&[vec![1, 1], vec![1, -1], vec![2, 0]]).unwrap();
        let x = a.solve(&[int(3), int(1), int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(a.solve(&[int(3), int(1), int(5)]).unwrap().is_none());
        assert!(a.solve(&[int(1)]).is_err());
    }

    #[test]
    fn products() {
        let a = ExactMatrix::from_rows(&[vec![0, 2], vec![1, 1]]).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, ExactMatrix::from_rows(&[vec![2, 2], vec![1, 3]]).unwrap());
        assert_eq!(a.trace(), int(1));
        assert_eq!(a.transpose().get(0, 1), &int(1));
        assert!(a.mul(&ExactMatrix::zeros(3, 3)).is_err());
        assert_eq!(a.shifted(&int(2)).unwrap().rank(), 1);
    }
}
