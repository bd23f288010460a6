//! Las Vegas computation of rank and left nullspace bases.
//!
//! Three layers build on each other:
//!
//! * [`nullspace_minimal_vectors`] finds the minimal nullspace vectors of
//!   degree at most `δ` of a full-column-rank `(n + p) x n` matrix from a
//!   truncated expansion of `B A^-1` and a shifted σ-basis;
//! * [`nullspace_2n`] obtains a full nullspace basis of an `(n + q) x n`
//!   matrix with `q <= n` by repeated calls that each settle at least half of
//!   the remaining vectors;
//! * [`nullspace`] handles arbitrary `m x n` inputs: it guesses the rank by
//!   evaluation, compresses the columns, peels off blocks of degree-`d`
//!   vectors and finishes with [`nullspace_2n`], then certifies the result.
//!
//! Every randomized step draws from a [`RandomPlan`], so a seed reproduces a
//! run exactly.

mod general;
mod minimal;
mod twon;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use general::{monte_carlo_rank_compress, nullspace, nullspace_once, Compression, NullspaceResult, ResidualStats};
pub use minimal::{approximation_order, nullspace_minimal_vectors, MinimalVectorsResult};
pub use twon::{nullspace_2n, PassRecord, TwoNResult};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;
use crate::polymat::{ConstMatrix, PolyMatrix};

/// Retries granted to a driver after its first attempt.
pub const DEFAULT_MAX_RETRIES: usize = 4;

/// A random quantity drawn during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sample {
    /// A constant premultiplier `Q`.
    Conditioner(ConstMatrix),
    /// An expansion point `x0`.
    ShiftPoint(u64),
    /// A column compression `P`.
    Compression(PolyMatrix),
    /// A rank-compressing postmultiplier `R`.
    RankProjector(ConstMatrix),
    /// A point at which a matrix is evaluated.
    EvalPoint(u64),
    /// The seed of a child stream.
    Fork(u64),
}

/// The source of randomness of a run, with a log of what it produced.
#[derive(Debug, Clone)]
pub struct RandomPlan {
    seed: u64,
    max_retries: usize,
    rng: ChaCha8Rng,
    samples: Vec<Sample>,
}

impl RandomPlan {
    pub fn new(seed: u64) -> RandomPlan {
        RandomPlan {
            seed,
            max_retries: DEFAULT_MAX_RETRIES,
            rng: ChaCha8Rng::seed_from_u64(seed),
            samples: Vec::new(),
        }
    }

    /// A plan seeded from operating system entropy.
    pub fn from_entropy() -> RandomPlan {
        RandomPlan::new(rand::random())
    }

    pub fn with_max_retries(mut self, max_retries: usize) -> RandomPlan {
        self.max_retries = max_retries;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_retries(&self) -> usize {
        self.max_retries
    }

    /// Everything sampled so far, in order.
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// An independent child stream, seeded from this one.
    pub fn fork(&mut self) -> RandomPlan {
        let seed = self.rng.gen();
        self.samples.push(Sample::Fork(seed));
        RandomPlan::new(seed).with_max_retries(self.max_retries)
    }

    pub(crate) fn conditioner(&mut self, f: PrimeField, rows: usize, cols: usize) -> ConstMatrix {
        let q = ConstMatrix::random(f, rows, cols, &mut self.rng);
        self.samples.push(Sample::Conditioner(q.clone()));
        q
    }

    pub(crate) fn shift_point(&mut self, f: PrimeField) -> u64 {
        let x0 = f.random(&mut self.rng);
        self.samples.push(Sample::ShiftPoint(x0));
        x0
    }

    pub(crate) fn compression(&mut self, f: PrimeField, rows: usize, cols: usize, degree: usize) -> PolyMatrix {
        let p = PolyMatrix::random(f, rows, cols, degree, &mut self.rng);
        self.samples.push(Sample::Compression(p.clone()));
        p
    }

    pub(crate) fn rank_projector(&mut self, f: PrimeField, rows: usize, cols: usize) -> ConstMatrix {
        let r = ConstMatrix::random(f, rows, cols, &mut self.rng);
        self.samples.push(Sample::RankProjector(r.clone()));
        r
    }

    pub(crate) fn eval_point(&mut self, f: PrimeField) -> u64 {
        let a = f.random(&mut self.rng);
        self.samples.push(Sample::EvalPoint(a));
        a
    }
}

/// Runs `attempt` until it succeeds or `plan.max_retries()` retries are
/// spent. Only [`Error::Fail`] triggers a retry; other errors are returned at
/// once. On success, also returns the number of retries used.
pub fn with_retries<T>(
    plan: &mut RandomPlan,
    mut attempt: impl FnMut(&mut RandomPlan) -> Result<T>,
) -> Result<(T, usize)> {
    let mut last = None;
    for used in 0..=plan.max_retries {
        match attempt(plan) {
            Ok(v) => return Ok((v, used)),
            Err(Error::Fail(f)) => last = Some(f),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Fail(last.expect("at least one attempt is made")))
}

/// Places the entries of `row` at `positions` in a zero row of length `len`.
fn scatter(f: PrimeField, row: &[Poly], positions: &[usize], len: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(f); len];
    for (p, &pos) in row.iter().zip(positions) {
        out[pos] = p.clone();
    }
    out
}

fn matrix_from_rows(f: PrimeField, cols: usize, rows: Vec<Vec<Poly>>) -> PolyMatrix {
    let n = rows.len();
    PolyMatrix::from_entries(f, n, cols, rows.into_iter().flatten().collect()).expect("rows share shape and field")
}

/// Row indices of `n` ordered by ascending degree, ties by index.
fn by_degree(n: &PolyMatrix) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n.rows()).collect();
    idx.sort_by_key(|&i| (n.row_degree(i), i));
    idx
}

/// For each row `N_i`, whether `N_i M = 0`.
///
/// Rows may have much larger degree than `M`. Each row is cut into slabs of
/// `deg M + 1` coefficients, all slabs are stacked and multiplied by `M` in a
/// single product, and the slab products are recombined with their offsets.
fn annihilated_rows(n: &PolyMatrix, m: &PolyMatrix) -> Result<Vec<bool>> {
    let f = m.field();
    let Some(d) = m.degree().to_usize() else {
        return Ok(vec![true; n.rows()]);
    };
    let w = d + 1;
    let mut slabs = Vec::new();
    let mut owner = Vec::new();
    for i in 0..n.rows() {
        let len = n.row_degree(i).to_usize().map_or(1, |deg| deg / w + 1);
        for k in 0..len {
            for p in n.row(i) {
                let lo = (k * w).min(p.len());
                let hi = ((k + 1) * w).min(p.len());
                slabs.push(Poly::from_raw(f, p.coeffs()[lo..hi].to_vec()));
            }
            owner.push((i, k));
        }
    }
    let stacked = PolyMatrix::from_entries(f, owner.len(), n.cols(), slabs)?;
    let prod = stacked.mul(m)?;
    let mut sums: Vec<Vec<Vec<u64>>> = vec![vec![Vec::new(); m.cols()]; n.rows()];
    for (r, &(i, k)) in owner.iter().enumerate() {
        for (j, acc) in sums[i].iter_mut().enumerate() {
            let c = prod.get(r, j).coeffs();
            let off = k * w;
            if acc.len() < off + c.len() {
                acc.resize(off + c.len(), 0);
            }
            for (a, &x) in acc[off..].iter_mut().zip(c) {
                *a = f.add(*a, x);
            }
        }
    }
    Ok(sums
        .iter()
        .map(|row| row.iter().all(|acc| acc.iter().all(|&c| c == 0)))
        .collect())
}
