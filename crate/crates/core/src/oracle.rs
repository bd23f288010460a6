//! Slow, independent reference computations for testing.
//!
//! Nothing here calls the series, σ-basis, nullspace or matrix product code,
//! nor the constant-matrix elimination: all linear algebra below is done by
//! routines local to this module.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;
use crate::polymat::{PolyMatrix, Shift};

/// Default cap on the row count `m(δ + 1)` of a linearization.
pub const DEFAULT_ROW_LIMIT: usize = 4096;

/// Largest dimension accepted by [`mcmillan_degree`].
pub const MCMILLAN_MAX_DIM: usize = 6;

/// The left Kronecker indices of a matrix with a minimal basis realizing
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerProfile {
    /// Sorted minimal indices, one per nullspace dimension.
    pub indices: Vec<usize>,
    /// Rank over `K(x)`.
    pub rank: usize,
    /// `(m - rank) x m` minimal basis, row `i` of degree `indices[i]`.
    pub basis: PolyMatrix,
}

/// Gaussian elimination on the block-Toeplitz linearization of `v -> v M`
/// for `deg v <= δ`.
///
/// Row `(k, i)` holds the coefficients of `x^k e_i M`. It is nonzero only in
/// column blocks `k..=k+d`, and since pivots are chosen with minimal `k`
/// every row keeps that band, so each is stored as a window of `n(d + 1)`
/// entries.
struct Linearization {
    f: PrimeField,
    m: usize,
    n: usize,
    d: usize,
    delta: usize,
    window: Vec<Vec<u64>>,
    transform: Option<Vec<Vec<u64>>>,
    alive: Vec<bool>,
}

impl Linearization {
    fn new(mat: &PolyMatrix, delta: usize, track: bool, limit: usize) -> Result<Linearization> {
        let (m, n) = (mat.rows(), mat.cols());
        let nrows = m * (delta + 1);
        if nrows > limit {
            return Err(Error::TooLarge(format!(
                "linearization with {nrows} rows exceeds the limit of {limit}"
            )));
        }
        let d = mat.degree().to_usize().unwrap_or(0);
        let width = n * (d + 1);
        let mut window = vec![vec![0u64; width]; nrows];
        for k in 0..=delta {
            for i in 0..m {
                let w = &mut window[k * m + i];
                for c in 0..n {
                    for (s, &coef) in mat.get(i, c).coeffs().iter().enumerate() {
                        w[s * n + c] = coef;
                    }
                }
            }
        }
        let transform = track.then(|| {
            (0..nrows)
                .map(|r| {
                    let mut t = vec![0u64; nrows];
                    t[r] = 1;
                    t
                })
                .collect()
        });
        Ok(Linearization {
            f: mat.field(),
            m,
            n,
            d,
            delta,
            window,
            transform,
            alive: vec![true; nrows],
        })
    }

    fn entry(&self, r: usize, block: usize, c: usize) -> u64 {
        let k = r / self.m;
        self.window[r][(block - k) * self.n + c]
    }

    fn eliminate(&mut self) {
        let f = self.f;
        let (m, n, d) = (self.m, self.n, self.d);
        for block in 0..=self.delta + d {
            let klo = block.saturating_sub(d);
            let khi = block.min(self.delta);
            if klo > khi {
                continue;
            }
            for c in 0..n {
                let cands: Vec<usize> = (klo * m..(khi + 1) * m)
                    .filter(|&r| self.alive[r] && self.entry(r, block, c) != 0)
                    .collect();
                let Some((&piv, rest)) = cands.split_first() else {
                    continue;
                };
                let kp = piv / m;
                let inv = f.inv(self.entry(piv, block, c));
                let start = block * n + c;
                let end = (kp + d + 1) * n;
                let pw = self.window[piv].clone();
                let pt = self.transform.as_ref().map(|t| t[piv].clone());
                for &r in rest {
                    let k = r / m;
                    let factor = f.mul(self.entry(r, block, c), inv);
                    let w = &mut self.window[r];
                    for g in start..end {
                        let pv = pw[g - kp * n];
                        if pv != 0 {
                            let slot = &mut w[g - k * n];
                            *slot = f.sub(*slot, f.mul(factor, pv));
                        }
                    }
                    if let (Some(t), Some(pt)) = (self.transform.as_mut(), pt.as_ref()) {
                        // A transform only involves rows with k at most its own.
                        let support = (kp + 1) * m;
                        for (x, &y) in t[r][..support].iter_mut().zip(&pt[..support]) {
                            if y != 0 {
                                *x = f.sub(*x, f.mul(factor, y));
                            }
                        }
                    }
                }
                self.alive[piv] = false;
            }
        }
        debug_assert!((0..self.alive.len())
            .filter(|&r| self.alive[r])
            .all(|r| self.window[r].iter().all(|&x| x == 0)));
    }

    fn kernel_dimension(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// The surviving rows as polynomial vectors.
    fn kernel_rows(&self) -> Vec<Vec<Poly>> {
        let t = self.transform.as_ref().expect("transforms were tracked");
        (0..self.alive.len())
            .filter(|&r| self.alive[r])
            .map(|r| {
                (0..self.m)
                    .map(|i| {
                        let coeffs = (0..=self.delta).map(|k| t[r][k * self.m + i]).collect();
                        Poly::from_coeffs(self.f, coeffs)
                    })
                    .collect()
            })
            .collect()
    }
}

/// A basis of `{v : deg v <= delta, v M = 0}` as rows of a matrix, from the
/// left kernel of the block-Toeplitz coefficient matrix.
pub fn kernel_linearized(m: &PolyMatrix, delta: usize) -> Result<PolyMatrix> {
    kernel_linearized_with_limit(m, delta, DEFAULT_ROW_LIMIT)
}

/// [`kernel_linearized`] with an explicit cap on `m(δ + 1)`.
pub fn kernel_linearized_with_limit(m: &PolyMatrix, delta: usize, limit: usize) -> Result<PolyMatrix> {
    let mut lin = Linearization::new(m, delta, true, limit)?;
    lin.eliminate();
    let rows = lin.kernel_rows();
    let count = rows.len();
    PolyMatrix::from_entries(m.field(), count, m.rows(), rows.into_iter().flatten().collect())
}

/// The dimension of `{v : deg v <= delta, v M = 0}` over `K`.
pub fn kernel_dimension(m: &PolyMatrix, delta: usize) -> Result<usize> {
    let mut lin = Linearization::new(m, delta, false, DEFAULT_ROW_LIMIT)?;
    lin.eliminate();
    Ok(lin.kernel_dimension())
}

/// Incrementally maintained row echelon basis of a subspace of `K^len`.
struct Span {
    f: PrimeField,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Span {
    fn new(f: PrimeField) -> Span {
        Span { f, rows: Vec::new() }
    }

    /// Adds `v` if it is outside the span; reports whether it was.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let f = self.f;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[piv]);
        v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        self.rows.push((piv, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn rank_of(f: PrimeField, rows: Vec<Vec<u64>>) -> usize {
    let mut span = Span::new(f);
    for r in rows {
        span.insert(r);
    }
    span.dim()
}

/// The rank of `M` over `K(x)`: the largest rank of `M(a)` over
/// `min(m, n) d + 1` distinct points. A nonzero minor has degree at most
/// `min(m, n) d`, so it cannot vanish at all of them.
pub fn rank_oracle(m: &PolyMatrix) -> Result<usize> {
    let Some(d) = m.degree().to_usize() else {
        return Ok(0);
    };
    let k = m.rows().min(m.cols());
    let needed = (k * d + 1) as u64;
    let p = m.field().modulus();
    if p < needed {
        return Err(Error::FieldTooSmall { p, needed });
    }
    let mut best = 0;
    for a in 0..needed {
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().map(|e| e.eval(a)).collect())
            .collect();
        best = best.max(rank_of(m.field(), rows));
        if best == k {
            break;
        }
    }
    Ok(best)
}

/// Kronecker indices by sweeping the degree bound.
///
/// With `k(δ)` the kernel dimension at bound `δ`, the number of indices at
/// most `δ` is `c(δ) = k(δ) - k(δ - 1)`. Where `c` grows, new basis rows are
/// taken from the kernel at `δ` whose `x^δ` coefficients extend the span of
/// the leading coefficients already chosen; the result is row-reduced.
pub fn kronecker_indices(m: &PolyMatrix) -> Result<KroneckerProfile> {
    let f = m.field();
    let rows = m.rows();
    let rank = rank_oracle(m)?;
    let target = rows - rank;
    let d = m.degree().to_usize().unwrap_or(0);
    let mut indices = Vec::new();
    let mut basis: Vec<Vec<Poly>> = Vec::new();
    let mut leads = Span::new(f);
    let mut prev_dim = 0;
    let mut prev_count = 0;
    let mut delta = 0;
    while indices.len() < target {
        if delta > rank * d {
            return Err(Error::InvalidArgument(format!(
                "no minimal index found up to the bound {}",
                rank * d
            )));
        }
        let dim = kernel_dimension(m, delta)?;
        let count = dim - prev_dim;
        if count > prev_count {
            let kernel = kernel_linearized(m, delta)?;
            let mut added = 0;
            for r in 0..kernel.rows() {
                if added == count - prev_count {
                    break;
                }
                let lead: Vec<u64> = kernel.row(r).iter().map(|p| p.coeff(delta)).collect();
                if leads.insert(lead) {
                    basis.push(kernel.row(r).to_vec());
                    indices.push(delta);
                    added += 1;
                }
            }
            debug_assert_eq!(added, count - prev_count);
        }
        prev_dim = dim;
        prev_count = count;
        delta += 1;
    }
    let basis = PolyMatrix::from_entries(f, indices.len(), rows, basis.into_iter().flatten().collect())?;
    Ok(KroneckerProfile { indices, rank, basis })
}

/// The largest degree of an `r x r` minor of `M`, by exhaustive Laplace
/// expansion.
pub fn mcmillan_degree(m: &PolyMatrix, r: usize) -> Result<usize> {
    if m.rows() > MCMILLAN_MAX_DIM || m.cols() > MCMILLAN_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "{}x{} exceeds the {MCMILLAN_MAX_DIM}x{MCMILLAN_MAX_DIM} limit",
            m.rows(),
            m.cols()
        )));
    }
    if r == 0 {
        return Ok(0);
    }
    let mut best = None;
    for rs in subsets(m.rows(), r) {
        for cs in subsets(m.cols(), r) {
            let det = laplace(m, &rs, &cs);
            if let Some(deg) = det.degree().to_usize() {
                best = Some(best.map_or(deg, |b: usize| b.max(deg)));
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument(format!("every {r}x{r} minor vanishes")))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn laplace(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
    let f = m.field();
    if rows.len() == 1 {
        return m.get(rows[0], cols[0]).clone();
    }
    let mut acc = Poly::zero(f);
    for (j, &c) in cols.iter().enumerate() {
        let e = m.get(rows[0], c);
        if e.is_zero() {
            continue;
        }
        let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = e * &laplace(m, &rows[1..], &minor_cols);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The dimension over `K` of `{v : deg v_i <= bound + t_i, v G = 0 mod x^order}`,
/// the approximants of `t`-degree at most `bound`.
pub fn approximant_kernel_dimension(g: &PolyMatrix, order: usize, t: &Shift, bound: i64) -> Result<usize> {
    if t.len() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "shift of length {} for {} rows",
            t.len(),
            g.rows()
        )));
    }
    let f = g.field();
    let s = g.cols();
    let mut rows = Vec::new();
    for (i, &ti) in t.0.iter().enumerate() {
        let top = bound.saturating_add(ti);
        if top < 0 {
            continue;
        }
        for a in 0..=(top as usize).min(order) {
            // Coefficients of x^a e_i G below x^order.
            let mut row = vec![0u64; order * s];
            for c in 0..s {
                for (k, &coef) in g.get(i, c).coeffs().iter().enumerate() {
                    if a + k < order {
                        row[(a + k) * s + c] = coef;
                    }
                }
            }
            rows.push(row);
        }
        // Unknowns x^a with a >= order are unconstrained.
        let free = (top as usize).saturating_sub(order);
        rows.extend((0..free).map(|_| vec![0u64; order * s]));
    }
    let unknowns = rows.len();
    Ok(unknowns - rank_of(f, rows))
}
