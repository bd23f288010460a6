//! Truncated power series expansions of matrix fractions.

use crate::error::{Error, Failure, Result};
use crate::polymat::{ConstMatrix, PolyMatrix};

/// A polynomial matrix read as a power series truncated at `x^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    matrix: PolyMatrix,
    order: usize,
}

impl SeriesMatrix {
    /// Truncates `matrix` to the given order.
    pub fn new(matrix: PolyMatrix, order: usize) -> SeriesMatrix {
        SeriesMatrix {
            matrix: matrix.truncate(order),
            order,
        }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The same series at a lower order.
    pub fn truncate(&self, order: usize) -> SeriesMatrix {
        SeriesMatrix::new(self.matrix.clone(), order.min(self.order))
    }
}

/// The expansion `X = A^-1 mod x^eta`, computed by Newton iteration
/// `X <- X (2I - A X)` from `X = A(0)^-1`, doubling the precision each step.
pub fn series_inverse(a: &PolyMatrix, eta: usize) -> Result<SeriesMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "series inverse of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let f = a.field();
    let n = a.rows();
    let x0 = a.coefficient(0).inverse().ok_or(Failure::SingularAtZero)?;
    let mut x = PolyMatrix::from_constant(&x0);
    let two = {
        let mut t = ConstMatrix::zeros(f, n, n);
        for i in 0..n {
            t.set(i, i, 2);
        }
        PolyMatrix::from_constant(&t)
    };
    let mut prec = 1;
    while prec < eta {
        prec = (2 * prec).min(eta);
        let ax = a.mul_mod(&x, prec)?;
        let correction = two.checked_sub(&ax)?;
        x = x.mul_mod(&correction, prec)?;
    }
    Ok(SeriesMatrix::new(x, eta))
}

/// The expansion `H = B A^-1 mod x^eta`.
pub fn left_quotient_series(b: &PolyMatrix, a: &PolyMatrix, eta: usize) -> Result<SeriesMatrix> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns against a {}x{} denominator",
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let inv = series_inverse(a, eta)?;
    Ok(SeriesMatrix::new(b.mul_mod(inv.matrix(), eta)?, eta))
}
