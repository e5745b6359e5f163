//! Dense exact matrices and fraction-free elimination kernels.
//!
//! Rational matrices are lifted to integer matrices by scaling each row by
//! the lcm of its denominators. Determinants divide the scaling back out;
//! ranks and pivot columns are unaffected by it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{denominator_lcm, Rat};

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from a list of rows; all rows must have the same length.
    /// An empty list gives a `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(nrows, cols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("ragged rows")
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

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rat) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, lambda: &Rat) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * lambda).collect(),
        }
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Rows scaled to integers, plus the product of the row scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = denominator_lcm(row);
                let out = row
                    .iter()
                    .map(|v| v.numer() * (&l / v.denom()))
                    .collect();
                scale *= l;
                out
            })
            .collect();
        (rows, scale)
    }

    pub fn det(&self) -> Result<Rat> {
        bareiss_det(self)
    }

    /// Determinant of the square submatrix on `rows` x `cols`. The empty
    /// minor is 1.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rat> {
        if rows.len() != cols.len() {
            return Err(Error::NotSquare {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        bareiss_det(&self.submatrix(rows, cols))
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Pivot columns of a fraction-free row reduction scanning columns left
    /// to right: the lexicographically first set of independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.pivot_columns_in_order(&order)
    }

    /// Like [`pivot_columns`](Self::pivot_columns) but scanning the columns in
    /// `order`. Returned pivots are in scan order.
    pub fn pivot_columns_in_order(&self, order: &[usize]) -> Vec<usize> {
        let (mut a, _) = self.integer_rows();
        echelon_pivots(&mut a, order)
    }

    /// Basis of `{ v : self * v = 0 }`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for v in a[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let factor = a[i][c].clone();
                    let pivot_row = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= &factor * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "inexact fraction-free division");
    q
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = exact_div(v, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square rational matrix.
pub fn bareiss_det(m: &ExactMatrix) -> Result<Rat> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let (rows, scale) = m.integer_rows();
    Ok(Rat::new(bareiss_det_int(rows), scale))
}

/// Fraction-free row echelon reduction in place; returns pivot columns.
fn echelon_pivots(a: &mut [Vec<BigInt>], order: &[usize]) -> Vec<usize> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for &c in order {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in 0..row.len() {
                let v = &row[j] * &pivot_row[c] - &lead * &pivot_row[j];
                row[j] = exact_div(v, &prev);
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}
