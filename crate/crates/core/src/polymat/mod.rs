//! Dense matrices of polynomials.

mod constant;
mod mul;

use std::fmt;

use rand::Rng;

pub use constant::ConstMatrix;
pub use mul::{mul_with, MulStrategy};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{Degree, Poly};

/// A degree shift `t`, one integer per row or column as the context demands.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Shift(pub Vec<i64>);

impl Shift {
    pub fn zeros(len: usize) -> Shift {
        Shift(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<i64>> for Shift {
    fn from(t: Vec<i64>) -> Shift {
        Shift(t)
    }
}

/// The shifted degree `max_i (deg v_i - t_i)` of a row; `NEG_INF` for zero.
pub fn tdeg_row(v: &[Poly], t: &Shift) -> Result<Degree> {
    if v.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} with shift of length {}",
            v.len(),
            t.len()
        )));
    }
    Ok(v.iter()
        .zip(&t.0)
        .map(|(p, &ti)| p.degree().offset(-ti))
        .max()
        .unwrap_or(Degree::NEG_INF))
}

/// A dense `rows x cols` matrix of polynomials sharing one modulus.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    degree: Degree,
}

impl PolyMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            field,
            rows,
            cols,
            entries: vec![Poly::zero(field); rows * cols],
            degree: Degree::NEG_INF,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(
            field,
            n,
            n,
            |i, j| {
                if i == j {
                    Poly::one(field)
                } else {
                    Poly::zero(field)
                }
            },
        )
    }

    /// Builds a matrix from row-major entries, checking shape and modulus.
    pub fn from_entries(field: PrimeField, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            field.ensure_same(&e.field())?;
        }
        Ok(PolyMatrix::from_polys(field, rows, cols, entries))
    }

    pub(crate) fn from_polys(field: PrimeField, rows: usize, cols: usize, entries: Vec<Poly>) -> PolyMatrix {
        debug_assert_eq!(entries.len(), rows * cols);
        let degree = max_degree(&entries);
        PolyMatrix {
            field,
            rows,
            cols,
            entries,
            degree,
        }
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> PolyMatrix {
        let entries = (0..rows * cols).map(|e| f(e / cols.max(1), e % cols.max(1))).collect();
        PolyMatrix::from_polys(field, rows, cols, entries)
    }

    /// Embeds a constant matrix.
    pub fn from_constant(c: &ConstMatrix) -> PolyMatrix {
        let f = c.field();
        PolyMatrix::from_fn(f, c.rows(), c.cols(), |i, j| Poly::constant(f, c.get(i, j)))
    }

    /// Assembles `sum_k C_k x^k` from coefficient matrices of equal shape.
    pub fn from_coefficients(
        field: PrimeField,
        rows: usize,
        cols: usize,
        coeffs: &[ConstMatrix],
    ) -> Result<PolyMatrix> {
        if coeffs.iter().any(|c| c.rows() != rows || c.cols() != cols) {
            return Err(Error::DimensionMismatch("coefficient matrices differ in shape".into()));
        }
        Ok(PolyMatrix::from_fn(field, rows, cols, |i, j| {
            Poly::from_raw(field, coeffs.iter().map(|c| c.get(i, j)).collect())
        }))
    }

    /// A matrix whose entries are independent random polynomials of degree
    /// at most `degree`.
    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        degree: usize,
        rng: &mut R,
    ) -> PolyMatrix {
        PolyMatrix::from_fn(field, rows, cols, |_, _| Poly::random(field, degree, rng))
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

    /// The maximum entry degree; `NEG_INF` for the zero matrix.
    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        !self.degree.is_finite()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    /// Replaces one entry, keeping the degree cache exact.
    ///
    /// # Panics
    /// If the entry's modulus differs from the matrix's.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.field(), self.field, "entry modulus mismatch");
        let old = std::mem::replace(&mut self.entries[i * self.cols + j], p);
        let new = self.entries[i * self.cols + j].degree();
        if new >= self.degree {
            self.degree = new;
        } else if old.degree() == self.degree {
            self.degree = max_degree(&self.entries);
        }
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Poly> {
        self.entries
    }

    pub fn row_degree(&self, i: usize) -> Degree {
        max_degree(self.row(i))
    }

    pub fn row_degrees(&self) -> Vec<Degree> {
        (0..self.rows).map(|i| self.row_degree(i)).collect()
    }

    pub fn tdeg_row(&self, i: usize, t: &Shift) -> Result<Degree> {
        tdeg_row(self.row(i), t)
    }

    /// The leading row coefficient matrix for the shift `t`: row `i` holds the
    /// coefficients of `x^(tdeg_i + t_j)` of each entry.
    pub fn leading_matrix(&self, t: &Shift) -> Result<ConstMatrix> {
        let mut lead = ConstMatrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let td = self.tdeg_row(i, t)?;
            if !td.is_finite() {
                continue;
            }
            for j in 0..self.cols {
                let p = self.get(i, j);
                if p.degree().offset(-t.0[j]) == td {
                    lead.set(i, j, p.leading_coeff());
                }
            }
        }
        Ok(lead)
    }

    /// Whether the `t`-shifted leading row coefficient matrix has full row
    /// rank. Fails on a zero row, for which the notion is undefined.
    pub fn is_row_reduced(&self, t: &Shift) -> Result<bool> {
        if t.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "shift of length {} for {} columns",
                t.len(),
                self.cols
            )));
        }
        if let Some(i) = (0..self.rows).find(|&i| !self.row_degree(i).is_finite()) {
            return Err(Error::ZeroRow(i));
        }
        Ok(self.leading_matrix(t)?.rank() == self.rows)
    }

    /// Entrywise `M(x + x0)`.
    pub fn shift_var(&self, x0: u64) -> PolyMatrix {
        self.map(|p| p.shift_var(x0))
    }

    /// Entrywise `M mod x^k`.
    pub fn truncate(&self, k: usize) -> PolyMatrix {
        self.map(|p| p.truncate(k))
    }

    /// `M * x^k`.
    pub fn shift_up(&self, k: usize) -> PolyMatrix {
        self.map(|p| p.shift_up(k))
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(Poly::neg)
    }

    fn map(&self, f: impl FnMut(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix::from_polys(self.field, self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Evaluation at the point `a`.
    pub fn eval(&self, a: u64) -> ConstMatrix {
        let data = self.entries.iter().map(|p| p.eval(a)).collect();
        ConstMatrix::from_raw(self.field, self.rows, self.cols, data)
    }

    /// The constant matrix of `x^k` coefficients.
    pub fn coefficient(&self, k: usize) -> ConstMatrix {
        let data = self.entries.iter().map(|p| p.coeff(k)).collect();
        ConstMatrix::from_raw(self.field, self.rows, self.cols, data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        let entries = idx.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        PolyMatrix::from_polys(self.field, idx.len(), self.cols, entries)
    }

    pub fn select_cols(&self, idx: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &PolyMatrix, bottom: &PolyMatrix) -> Result<PolyMatrix> {
        top.field.ensure_same(&bottom.field)?;
        if top.cols != bottom.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                top.cols, bottom.cols
            )));
        }
        let mut entries = top.entries.clone();
        entries.extend_from_slice(&bottom.entries);
        Ok(PolyMatrix::from_polys(
            top.field,
            top.rows + bottom.rows,
            top.cols,
            entries,
        ))
    }

    /// Places `left` beside `right`.
    pub fn hstack(left: &PolyMatrix, right: &PolyMatrix) -> Result<PolyMatrix> {
        left.field.ensure_same(&right.field)?;
        if left.rows != right.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                left.rows, right.rows
            )));
        }
        let lc = left.cols;
        Ok(PolyMatrix::from_fn(left.field, left.rows, lc + right.cols, |i, j| {
            if j < lc {
                left.get(i, j).clone()
            } else {
                right.get(i, j - lc).clone()
            }
        }))
    }

    pub fn checked_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(PolyMatrix::from_polys(self.field, self.rows, self.cols, entries))
    }

    pub fn checked_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(PolyMatrix::from_polys(self.field, self.rows, self.cols, entries))
    }

    fn same_shape(&self, other: &PolyMatrix) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// The exact product `self * other`.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        mul_with(self, other, MulStrategy::Auto)
    }

    /// `(self * other) mod x^k`.
    pub fn mul_mod(&self, other: &PolyMatrix, k: usize) -> Result<PolyMatrix> {
        if k == 0 {
            // Still validate the operands.
            mul_with(&self.truncate(0), &other.truncate(0), MulStrategy::Convolution)?;
            return Ok(PolyMatrix::zeros(self.field, self.rows, other.cols));
        }
        Ok(self.truncate(k).mul(&other.truncate(k))?.truncate(k))
    }

    /// `C * self` for a constant `C`.
    pub fn mul_const_left(&self, c: &ConstMatrix) -> Result<PolyMatrix> {
        PolyMatrix::from_constant(c).mul(self)
    }

    /// `self * C` for a constant `C`.
    pub fn mul_const_right(&self, c: &ConstMatrix) -> Result<PolyMatrix> {
        self.mul(&PolyMatrix::from_constant(c))
    }
}

fn max_degree(entries: &[Poly]) -> Degree {
    entries.iter().map(Poly::degree).max().unwrap_or(Degree::NEG_INF)
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "PolyMatrix {}x{} over {:?}, degree {}",
            self.rows, self.cols, self.field, self.degree
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::from_signed(field(), c)
    }

    fn mat(rows: usize, cols: usize, e: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_entries(field(), rows, cols, e.iter().map(|c| poly(c)).collect()).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = PolyMatrix::random(f, 3, 4, 2, &mut rng);
        assert_eq!(a.mul(&PolyMatrix::identity(f, 4)).unwrap(), a);
        let col = mat(2, 1, &[&[0, 1], &[1]]);
        let row = mat(1, 1, &[&[1, 1]]);
        assert_eq!(col.mul(&row).unwrap(), mat(2, 1, &[&[0, 1, 1], &[1, 1]]));
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn truncated_products() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = PolyMatrix::random(f, 3, 3, 4, &mut rng);
        let b = PolyMatrix::random(f, 3, 2, 5, &mut rng);
        assert!(a.mul_mod(&b, 0).unwrap().is_zero());
        let full = a.mul(&b).unwrap();
        assert_eq!(a.mul_mod(&b, 10).unwrap(), full);
        for k in [1, 3, 7] {
            assert_eq!(a.mul_mod(&b, k).unwrap(), full.truncate(k));
        }
    }

    #[test]
    fn shifted_degrees() {
        let v = [poly(&[0, 0, 1]), poly(&[1])];
        assert_eq!(tdeg_row(&v, &Shift::zeros(2)).unwrap(), Degree::finite(2));
        assert_eq!(tdeg_row(&v, &Shift(vec![3, 0])).unwrap(), Degree::finite(0));
        let z = [Poly::zero(field()), Poly::zero(field())];
        assert_eq!(tdeg_row(&z, &Shift::zeros(2)).unwrap(), Degree::NEG_INF);
        assert!(tdeg_row(&v, &Shift::zeros(3)).is_err());
    }

    #[test]
    fn row_reducedness() {
        let f = field();
        assert!(PolyMatrix::identity(f, 3).is_row_reduced(&Shift::zeros(3)).unwrap());
        let m = mat(2, 2, &[&[1], &[0, 1], &[0, 1], &[0, 0, 1]]);
        assert!(!m.is_row_reduced(&Shift::zeros(2)).unwrap());
        let single = mat(1, 2, &[&[3, 4], &[1]]);
        assert!(single.is_row_reduced(&Shift::zeros(2)).unwrap());
        let zero_row = mat(2, 1, &[&[1], &[]]);
        assert_eq!(zero_row.is_row_reduced(&Shift::zeros(1)), Err(Error::ZeroRow(1)));
    }

    #[test]
    fn evaluation_shift_and_random() {
        let f = field();
        let xi = PolyMatrix::identity(f, 3).shift_up(1);
        let mut two = ConstMatrix::identity(f, 3);
        for i in 0..3 {
            two.set(i, i, 2);
        }
        assert_eq!(xi.eval(2), two);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = PolyMatrix::random(f, 3, 2, 4, &mut rng);
        assert_eq!((r.rows(), r.cols()), (3, 2));
        assert!(r.degree() <= Degree::finite(4));
        assert_eq!(r.shift_var(0), r);
    }

    #[test]
    fn degree_cache_follows_mutation() {
        let f = field();
        let mut m = PolyMatrix::zeros(f, 2, 2);
        assert_eq!(m.degree(), Degree::NEG_INF);
        m.set(0, 1, poly(&[0, 0, 0, 5]));
        m.set(1, 0, poly(&[1, 1]));
        assert_eq!(m.degree(), Degree::finite(3));
        m.set(0, 1, Poly::zero(f));
        assert_eq!(m.degree(), Degree::finite(1));
    }

    #[test]
    fn stacking() {
        let a = mat(1, 2, &[&[1], &[2]]);
        let b = mat(1, 2, &[&[3], &[0, 4]]);
        let v = PolyMatrix::vstack(&a, &b).unwrap();
        assert_eq!(v.row(1), b.row(0));
        let h = PolyMatrix::hstack(&a, &b).unwrap();
        assert_eq!((h.rows(), h.cols()), (1, 4));
        assert_eq!(h.get(0, 3), &poly(&[0, 4]));
        assert_eq!(v.select_rows(&[1]), b);
        assert_eq!(h.select_cols(&[2, 3]), b);
    }
}
