use crate::error::{Failure, Result};
use crate::poly::Poly;
use crate::polymat::{ConstMatrix, PolyMatrix};

use super::{
    by_degree, matrix_from_rows, nullspace_2n, nullspace_minimal_vectors, scatter, with_retries, PassRecord, RandomPlan,
};

/// Output of [`monte_carlo_rank_compress`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    /// Rank of the input at `point`, a lower bound for its rank.
    pub r0: usize,
    /// `M R`, with `r0` columns.
    pub mtilde: PolyMatrix,
    /// The random constant `n x r0` matrix `R`.
    pub projector: ConstMatrix,
    /// The evaluation point.
    pub point: u64,
}

/// Guesses the rank as the rank at a random point and compresses the input
/// to that many columns. The left nullspace can only grow under compression
/// and stays the same with high probability.
pub fn monte_carlo_rank_compress(m: &PolyMatrix, plan: &mut RandomPlan) -> Compression {
    let f = m.field();
    let point = plan.eval_point(f);
    let r0 = m.eval(point).rank();
    let projector = plan.rank_projector(f, m.cols(), r0);
    let mtilde = m.mul_const_right(&projector).expect("projector has matching rows");
    Compression {
        r0,
        mtilde,
        projector,
        point,
    }
}

/// Instrumentation of the final [`nullspace_2n`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualStats {
    /// Column count of the residual block.
    pub n: usize,
    /// Nullspace dimension of the residual block.
    pub q: usize,
    /// Degree bound of the residual block.
    pub d: usize,
    /// Degree sum of its basis.
    pub degree_sum: usize,
    pub passes: Vec<PassRecord>,
}

/// A certified rank and left nullspace basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullspaceResult {
    pub rank: usize,
    /// `(m - rank) x m` basis, rows by ascending degree.
    pub basis: PolyMatrix,
    pub degrees: Vec<usize>,
    pub degree_sum: usize,
    pub seed: u64,
    pub retries_used: usize,
    /// Number of degree-`d` blocks peeled off before the residual call.
    pub blocks: usize,
    /// Present when the residual call ran.
    pub residual: Option<ResidualStats>,
}

/// Rank and left nullspace basis of `M`, retrying failed attempts with fresh
/// randomness up to `plan.max_retries()` times.
pub fn nullspace(m: &PolyMatrix, plan: &mut RandomPlan) -> Result<NullspaceResult> {
    let (mut res, used) = with_retries(plan, |p| nullspace_once(m, p))?;
    res.retries_used = used;
    res.seed = plan.seed();
    Ok(res)
}

/// One attempt of [`nullspace`].
///
/// On success the result is certified: `N M = 0` exactly and `N` has full row
/// rank `m - r` at a random point. Together with the rank `r` observed at
/// another point, this proves both the rank and the basis.
pub fn nullspace_once(m: &PolyMatrix, plan: &mut RandomPlan) -> Result<NullspaceResult> {
    let f = m.field();
    let rows = m.rows();
    let seed = plan.seed();
    let finish = |rank: usize, basis: PolyMatrix, blocks, residual| {
        let degrees: Vec<usize> = basis.row_degrees().iter().map(|d| d.to_usize().unwrap_or(0)).collect();
        NullspaceResult {
            rank,
            degree_sum: degrees.iter().sum(),
            degrees,
            basis,
            seed,
            retries_used: 0,
            blocks,
            residual,
        }
    };
    if m.cols() == 0 || m.is_zero() {
        return Ok(finish(0, PolyMatrix::identity(f, rows), 0, None));
    }

    // (a) rank guess and compression
    let comp = monte_carlo_rank_compress(m, plan);
    let r0 = comp.r0;
    if r0 == rows {
        return Ok(finish(rows, PolyMatrix::zeros(f, 0, rows), 0, None));
    }
    if r0 == 0 {
        return Err(Failure::RankCandidateWrong.into());
    }

    // (b) conditioning of the top r0 rows only
    let head = plan.conditioner(f, r0, rows);
    let mut qg = ConstMatrix::identity(f, rows);
    for i in 0..r0 {
        for j in 0..rows {
            qg.set(i, j, head.get(i, j));
        }
    }
    let mc = comp.mtilde.mul_const_left(&qg)?;
    let top: Vec<usize> = (0..r0).collect();
    let a = plan.eval_point(f);
    if mc.select_rows(&top).eval(a).rank() < r0 {
        return Err(Failure::SingularLeadingBlock.into());
    }
    let d = mc.degree().to_usize().unwrap_or(0);

    // (c) blocks of 2r0 < ι <= 3r0 rows, each yielding ι - 2r0 vectors of
    // degree at most d
    let mut basis_rows: Vec<Vec<Poly>> = Vec::with_capacity(rows - r0);
    let mut carried: Vec<usize> = Vec::new();
    let mut blocks = 0;
    if rows > 2 * r0 {
        let q = (rows - 2 * r0).div_ceil(r0);
        let mut next_fresh = r0;
        for k in 1..=q {
            let iota = if k < q { 3 * r0 } else { rows - (q - 1) * r0 };
            let fresh = iota - r0 - carried.len();
            let others: Vec<usize> = carried.iter().copied().chain(next_fresh..next_fresh + fresh).collect();
            next_fresh += fresh;
            let sel: Vec<usize> = top.iter().chain(&others).copied().collect();
            let mut child = plan.fork();
            let found = nullspace_minimal_vectors(&mc.select_rows(&sel), d, &mut child)?;
            let need = iota - 2 * r0;
            if found.kappa < need {
                return Err(Failure::InsufficientVectors {
                    needed: need,
                    found: found.kappa,
                }
                .into());
            }
            let kept: Vec<_> = (0..need)
                .map(|i| scatter(f, found.vectors.row(i), &sel, rows))
                .collect();
            let kept = matrix_from_rows(f, rows, kept);
            let pt = child.eval_point(f);
            let cols = kept.select_cols(&others).eval(pt).independent_columns();
            if cols.len() < need {
                return Err(Failure::DependentColumns.into());
            }
            let chosen: Vec<usize> = cols.iter().map(|&c| others[c]).collect();
            carried = others.into_iter().filter(|r| !chosen.contains(r)).collect();
            basis_rows.extend((0..kept.rows()).map(|i| kept.row(i).to_vec()));
            blocks += 1;
        }
        debug_assert_eq!(next_fresh, rows);
        debug_assert_eq!(carried.len(), r0);
    }

    // (d) the residual (at most 2r0) x r0 block
    let residual_rows: Vec<usize> = if rows > 2 * r0 {
        top.iter().chain(&carried).copied().collect()
    } else {
        (0..rows).collect()
    };
    let residual_m = mc.select_rows(&residual_rows);
    let mut child = plan.fork();
    let two = nullspace_2n(&residual_m, &mut child)?;
    let stats = ResidualStats {
        n: r0,
        q: residual_rows.len() - r0,
        d: residual_m.degree().to_usize().unwrap_or(0),
        degree_sum: two.degree_sum(),
        passes: two.passes.clone(),
    };
    basis_rows.extend((0..two.basis.rows()).map(|i| scatter(f, two.basis.row(i), &residual_rows, rows)));

    let basis = matrix_from_rows(f, rows, basis_rows).mul_const_right(&qg)?;
    let basis = basis.select_rows(&by_degree(&basis));

    // (e) certification against the original input
    if !basis.mul(m)?.is_zero() {
        return Err(Failure::RankCandidateWrong.into());
    }
    let found = basis.eval(plan.eval_point(f)).rank();
    if found != rows - r0 {
        return Err(Failure::RankDeficientBasis {
            expected: rows - r0,
            found,
        }
        .into());
    }
    Ok(finish(r0, basis, blocks, Some(stats)))
}
