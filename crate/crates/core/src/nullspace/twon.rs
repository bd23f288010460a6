use crate::error::{Error, Failure, Result};
use crate::polymat::PolyMatrix;

use super::{matrix_from_rows, nullspace_minimal_vectors, scatter, RandomPlan};

/// One pass of [`nullspace_2n`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassRecord {
    /// Nullspace vectors still missing when the pass started.
    pub remaining: usize,
    /// The degree threshold `⌈2nd/p⌉` used.
    pub delta: usize,
    /// Vectors found in the pass.
    pub kappa: usize,
    /// Their degrees.
    pub degrees: Vec<usize>,
}

/// A nullspace basis of an `(n + q) x n` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoNResult {
    /// `q x (n + q)` basis.
    pub basis: PolyMatrix,
    /// Row degrees of `basis`.
    pub degrees: Vec<usize>,
    /// One record per pass, in order.
    pub passes: Vec<PassRecord>,
}

impl TwoNResult {
    pub fn degree_sum(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// A full nullspace basis of a full column rank `(n + q) x n` matrix with
/// `1 <= q <= n`.
///
/// Each pass asks for the minimal vectors of degree at most `⌈2nd/p⌉` of the
/// top `n` rows stacked with the `p` rows not yet settled. At most `p/2`
/// minimal indices can exceed that threshold, so every pass settles at least
/// half of the remaining rows; the settled rows are chosen where the new
/// vectors have a nonsingular block, which keeps the final basis independent.
pub fn nullspace_2n(m: &PolyMatrix, plan: &mut RandomPlan) -> Result<TwoNResult> {
    let f = m.field();
    let n = m.cols();
    let rows = m.rows();
    if rows <= n || rows - n > n {
        return Err(Error::InvalidArgument(format!(
            "expected an (n + q) x n matrix with 1 <= q <= n, got {rows}x{n}"
        )));
    }
    let q = rows - n;
    let conditioner = plan.conditioner(f, rows, rows);
    let mq = m.mul_const_left(&conditioner)?;
    let top: Vec<usize> = (0..n).collect();
    let a = plan.eval_point(f);
    if mq.select_rows(&top).eval(a).rank() < n {
        return Err(Failure::SingularLeadingBlock.into());
    }
    let d = m.degree().to_usize().unwrap_or(0);

    let mut remaining: Vec<usize> = (n..rows).collect();
    let mut basis_rows = Vec::with_capacity(q);
    let mut passes = Vec::new();
    while !remaining.is_empty() {
        let p = remaining.len();
        let delta = (2 * n * d).div_ceil(p);
        let sel: Vec<usize> = top.iter().chain(&remaining).copied().collect();
        let found = nullspace_minimal_vectors(&mq.select_rows(&sel), delta, plan)?;
        if found.kappa < p.div_ceil(2) {
            return Err(Failure::StalledHalving {
                remaining: p,
                kappa: found.kappa,
            }
            .into());
        }
        let placed: Vec<_> = (0..found.kappa)
            .map(|i| scatter(f, found.vectors.row(i), &sel, rows))
            .collect();
        let placed = matrix_from_rows(f, rows, placed);
        let pt = plan.eval_point(f);
        let cols = placed.select_cols(&remaining).eval(pt).independent_columns();
        if cols.len() < found.kappa {
            return Err(Failure::DependentColumns.into());
        }
        let chosen: Vec<usize> = cols.iter().map(|&c| remaining[c]).collect();
        remaining.retain(|r| !chosen.contains(r));
        basis_rows.extend((0..placed.rows()).map(|i| placed.row(i).to_vec()));
        passes.push(PassRecord {
            remaining: p,
            delta,
            kappa: found.kappa,
            degrees: found.degrees,
        });
    }

    let basis = matrix_from_rows(f, rows, basis_rows).mul_const_right(&conditioner)?;
    let degrees = basis
        .row_degrees()
        .iter()
        .map(|d| d.to_usize().expect("basis rows are independent"))
        .collect();
    Ok(TwoNResult { basis, degrees, passes })
}
