use crate::error::{Error, Failure, Result};
use crate::orderbasis::sigma_basis;
use crate::polymat::{PolyMatrix, Shift};
use crate::series::left_quotient_series;

use super::{annihilated_rows, by_degree, RandomPlan};

/// The certified minimal nullspace vectors of degree at most `δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalVectorsResult {
    /// Number of vectors found.
    pub kappa: usize,
    /// `κ x (n + p)` matrix of vectors, by ascending degree.
    pub vectors: PolyMatrix,
    /// Their exact degrees.
    pub degrees: Vec<usize>,
    /// The last `p` columns of the vectors before the conditioner was
    /// undone, in the original variable. Same row order as `vectors`.
    pub denominators: PolyMatrix,
    /// The truncation order used for the expansion and the σ-basis.
    pub order: usize,
}

/// The expansion order `δ + d + ⌈nd/p⌉` that guarantees every vector of
/// degree at most `δ` is reconstructed.
pub fn approximation_order(n: usize, p: usize, d: usize, delta: usize) -> usize {
    delta + d + (n * d).div_ceil(p)
}

/// Minimal nullspace vectors of degree at most `delta` of a full column rank
/// `(n + p) x n` matrix `M`.
///
/// With `M` conditioned by a random constant `Q` and shifted to a random
/// point `x0`, write `QM(x + x0) = [A; B]` with `A` square. The vectors are
/// reconstructed from a σ-basis of `[-I; B A^-1 P]` (with a random
/// compression `P` only when `p < n`) and then certified: all must
/// annihilate `M` exactly and together form a row-reduced matrix. The
/// returned degrees are then the smallest Kronecker indices of `M` up to
/// `delta`.
///
/// Degree-0 inputs are treated as degree 1 in the order and compression
/// bounds.
pub fn nullspace_minimal_vectors(m: &PolyMatrix, delta: usize, plan: &mut RandomPlan) -> Result<MinimalVectorsResult> {
    let f = m.field();
    let n = m.cols();
    if m.rows() <= n {
        return Err(Error::InvalidArgument(format!(
            "minimal vectors need more rows than columns, got {}x{n}",
            m.rows()
        )));
    }
    let p = m.rows() - n;
    if n == 0 {
        let id = PolyMatrix::identity(f, p);
        return Ok(MinimalVectorsResult {
            kappa: p,
            vectors: id.clone(),
            degrees: vec![0; p],
            denominators: id,
            order: 0,
        });
    }
    let d = m.degree().to_usize().unwrap_or(0).max(1);

    // (a), (b)
    let q = plan.conditioner(f, n + p, n + p);
    let x0 = plan.shift_point(f);
    let shifted = m.mul_const_left(&q)?.shift_var(x0);
    let a = shifted.select_rows(&(0..n).collect::<Vec<_>>());
    let b = shifted.select_rows(&(n..n + p).collect::<Vec<_>>());

    // (c)
    let eta = approximation_order(n, p, d, delta);
    let h = left_quotient_series(&b, &a, eta)?.into_matrix();

    // (d), (e)
    let (hp, width, lead) = if p < n {
        let compression = plan.compression(f, n, p, d - 1);
        (h.mul_mod(&compression, eta)?, p, (d - 1) as i64)
    } else {
        (h.clone(), n, 0)
    };
    let g = PolyMatrix::vstack(&PolyMatrix::identity(f, width).neg(), &hp)?;
    let mut t = vec![lead; width];
    t.extend(std::iter::repeat(0).take(p));
    let sb = sigma_basis(&g, eta, &Shift(t))?;

    // (f), (g)
    let (kappa, rows) = sb.select_low_rows(delta as i64);
    let s = sb
        .basis()
        .select_rows(&rows)
        .select_cols(&(width..width + p).collect::<Vec<_>>());
    let numer = s.mul_mod(&h, delta + 1)?;
    let unshift = f.neg(x0);
    let candidates = PolyMatrix::hstack(&numer, &s.neg())?.shift_var(unshift);
    let vectors = candidates.mul_const_right(&q)?;

    // (h)
    let certified = annihilated_rows(&vectors, m)?.into_iter().filter(|&ok| ok).count();
    if certified != kappa {
        return Err(Failure::KappaMismatch {
            candidates: kappa,
            certified,
        }
        .into());
    }

    // (i)
    if kappa > 0 {
        match vectors.is_row_reduced(&Shift::zeros(n + p)) {
            Ok(true) => {}
            Ok(false) | Err(Error::ZeroRow(_)) => return Err(Failure::NotRowReduced.into()),
            Err(e) => return Err(e),
        }
    }

    let order = by_degree(&vectors);
    let vectors = vectors.select_rows(&order);
    let denominators = s.shift_var(unshift).select_rows(&order);
    let degrees = vectors
        .row_degrees()
        .iter()
        .map(|d| d.to_usize().expect("certified rows are nonzero"))
        .collect();
    Ok(MinimalVectorsResult {
        kappa,
        vectors,
        degrees,
        denominators,
        order: eta,
    })
}
