//! Dense matrices over `F_p` and Gaussian elimination.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// A dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConstMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form with its pivot columns.
struct Echelon {
    matrix: ConstMatrix,
    pivots: Vec<usize>,
}

impl ConstMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> ConstMatrix {
        ConstMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> ConstMatrix {
        let mut m = ConstMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors, reducing entries mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<ConstMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ConstMatrix {
            field,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&c| field.reduce(c)).collect(),
        })
    }

    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> ConstMatrix {
        debug_assert_eq!(data.len(), rows * cols);
        ConstMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A matrix with independent uniform entries.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> ConstMatrix {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        ConstMatrix::from_raw(field, rows, cols, data)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn transpose(&self) -> ConstMatrix {
        let mut t = ConstMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> ConstMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        ConstMatrix::from_raw(self.field, idx.len(), self.cols, data)
    }

    pub fn select_cols(&self, idx: &[usize]) -> ConstMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            data.extend(idx.iter().map(|&j| self.get(i, j)));
        }
        ConstMatrix::from_raw(self.field, self.rows, idx.len(), data)
    }

    pub fn checked_mul(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        self.field.ensure_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![0u64; self.rows * other.cols];
        mul_raw(
            self.field,
            &self.data,
            &other.data,
            self.rows,
            self.cols,
            other.cols,
            &mut out,
        );
        Ok(ConstMatrix::from_raw(self.field, self.rows, other.cols, out))
    }

    fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Indices of the pivot columns of the row echelon form: a lexicographically
    /// first maximal set of linearly independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// A row basis of the left kernel `{v : v * self = 0}`, of dimension
    /// `rows - rank`.
    pub fn left_kernel(&self) -> ConstMatrix {
        let f = self.field;
        let ech = self.transpose().echelon();
        // Solve (self^T) v^T = 0; free variables index kernel vectors.
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
        let mut out = ConstMatrix::zeros(f, free.len(), n);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * n + fc] = 1;
            for (pr, &pc) in ech.pivots.iter().enumerate() {
                out.data[k * n + pc] = f.neg(ech.matrix.get(pr, fc));
            }
        }
        out
    }

    /// The inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<ConstMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = ConstMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(ech.matrix.select_cols(&idx))
    }
}

/// `out = a * b` for row-major `a` (`m x k`) and `b` (`k x n`), accumulating
/// exactly in `u128`.
pub(crate) fn mul_raw(f: PrimeField, a: &[u64], b: &[u64], m: usize, k: usize, n: usize, out: &mut [u64]) {
    let mut acc = vec![0u128; n];
    for i in 0..m {
        acc.iter_mut().for_each(|s| *s = 0);
        for l in 0..k {
            let ail = a[i * k + l];
            if ail == 0 {
                continue;
            }
            for (s, &blj) in acc.iter_mut().zip(&b[l * n..(l + 1) * n]) {
                *s += u128::from(ail * blj);
            }
        }
        for (o, &s) in out[i * n..(i + 1) * n].iter_mut().zip(&acc) {
            *o = f.reduce_wide(s);
        }
    }
}

impl fmt::Debug for ConstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ConstMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
