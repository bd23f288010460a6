//! Shifted σ-bases (order bases) by iterative order-by-order elimination.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;
use crate::polymat::{PolyMatrix, Shift};

/// A square polynomial matrix `L` whose rows generate every row `v` with
/// `v G = 0 mod x^order`, together with the shifted degrees of its rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaBasis {
    basis: PolyMatrix,
    tdegs: Vec<i64>,
    order: usize,
    shift: Shift,
}

impl SigmaBasis {
    pub fn basis(&self) -> &PolyMatrix {
        &self.basis
    }

    /// The `t`-degree of each row of `L`.
    pub fn tdegs(&self) -> &[i64] {
        &self.tdegs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    /// The rows of `t`-degree at most `delta`, sorted by `t`-degree and then
    /// by row index. Returns their count and indices.
    pub fn select_low_rows(&self, delta: i64) -> (usize, Vec<usize>) {
        let mut idx: Vec<usize> = (0..self.tdegs.len()).filter(|&i| self.tdegs[i] <= delta).collect();
        idx.sort_by_key(|&i| (self.tdegs[i], i));
        (idx.len(), idx)
    }
}

/// Computes a σ-basis of the `q x s` series `G` to the given order with
/// respect to the shift `t` (one entry per row of `G`).
///
/// Orders `x^0, x^1, ...` are processed in turn and, within an order, the
/// columns of `G` left to right. At each step the rows whose residual has a
/// nonzero coefficient are reduced against the one of minimal `t`-degree
/// (lowest index on ties), which is then multiplied by `x`.
pub fn sigma_basis(g: &PolyMatrix, order: usize, t: &Shift) -> Result<SigmaBasis> {
    let (q, s) = (g.rows(), g.cols());
    if t.len() != q {
        return Err(Error::DimensionMismatch(format!(
            "shift of length {} for {q} rows",
            t.len()
        )));
    }
    let f = g.field();
    let mut l: Vec<Vec<Vec<u64>>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| if i == j { vec![1 % f.modulus()] } else { Vec::new() })
                .collect()
        })
        .collect();
    let mut r: Vec<Vec<Vec<u64>>> = (0..q)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let mut c = g.get(i, j).truncate(order).into_coeffs();
                    c.resize(order, 0);
                    c
                })
                .collect()
        })
        .collect();
    let mut tdegs: Vec<i64> = t.0.iter().map(|&ti| -ti).collect();

    for k in 0..order {
        for j in 0..s {
            let Some(piv) = (0..q).filter(|&i| r[i][j][k] != 0).min_by_key(|&i| (tdegs[i], i)) else {
                continue;
            };
            let inv = f.inv(r[piv][j][k]);
            let (lp, rp) = (l[piv].clone(), r[piv].clone());
            for c in 0..q {
                if c == piv || r[c][j][k] == 0 {
                    continue;
                }
                let factor = f.mul(r[c][j][k], inv);
                for (dst, src) in l[c].iter_mut().zip(&lp) {
                    axpy(f, dst, src, factor, 0);
                    while dst.last() == Some(&0) {
                        dst.pop();
                    }
                }
                for (dst, src) in r[c].iter_mut().zip(&rp) {
                    axpy(f, dst, src, factor, k);
                }
                debug_assert_eq!(r[c][j][k], 0);
            }
            for e in l[piv].iter_mut().filter(|e| !e.is_empty()) {
                e.insert(0, 0);
            }
            for e in r[piv].iter_mut() {
                e.rotate_right(1);
                e[0] = 0;
            }
            tdegs[piv] += 1;
        }
    }

    let entries = l.into_iter().flatten().map(|c| Poly::from_raw(f, c)).collect();
    let basis = PolyMatrix::from_polys(f, q, q, entries);
    debug_assert!((0..q).all(|i| basis.tdeg_row(i, t).unwrap().as_i64() == tdegs[i]));
    Ok(SigmaBasis {
        basis,
        tdegs,
        order,
        shift: t.clone(),
    })
}

/// `dst -= factor * src` on coefficients from index `from` on.
fn axpy(f: PrimeField, dst: &mut Vec<u64>, src: &[u64], factor: u64, from: usize) {
    if src.len() > dst.len() {
        dst.resize(src.len(), 0);
    }
    for (d, &s) in dst[from..].iter_mut().zip(&src[from.min(src.len())..]) {
        *d = f.sub(*d, f.mul(factor, s));
    }
}
