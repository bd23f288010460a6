//! Instance generators and naive checks shared by the integration tests.
//!
//! The checks here use plain coefficient arithmetic so that they do not
//! depend on the library's product or elimination code.

#![allow(dead_code)]

use polyrank::{Poly, PolyMatrix, PrimeField, DEFAULT_PRIME};
use rand::Rng;

pub fn field() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

/// A random `m x n` matrix of degree at most `d` and rank `r` (for
/// `r <= min(m, n)`), as a product of random factors whose degrees add to
/// `d`. Full rank shapes are sampled directly.
pub fn planted(f: PrimeField, m: usize, n: usize, r: usize, d: usize, rng: &mut impl Rng) -> PolyMatrix {
    if r >= m.min(n) {
        return PolyMatrix::random(f, m, n, d, rng);
    }
    if r == 0 {
        return PolyMatrix::zeros(f, m, n);
    }
    let d1 = rng.gen_range(0..=d);
    let left = PolyMatrix::random(f, m, r, d1, rng);
    let right = PolyMatrix::random(f, r, n, d - d1, rng);
    naive_product(&left, &right)
}

/// A full column rank `(n + p) x n` matrix with a varied Kronecker profile:
/// columns get independent degrees and some rows are planted combinations of
/// others with low-degree multipliers.
pub fn structured_tall(f: PrimeField, n: usize, p: usize, d: usize, rng: &mut impl Rng) -> PolyMatrix {
    loop {
        let degs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=d)).collect();
        let mut m = PolyMatrix::from_fn(f, n + p, n, |_, j| Poly::random(f, degs[j], rng));
        let planted = rng.gen_range(0..=p);
        for _ in 0..planted {
            let target = rng.gen_range(n..n + p);
            let src = rng.gen_range(0..n + p);
            if src == target {
                continue;
            }
            let c = Poly::random(f, rng.gen_range(0..=1), rng);
            let row: Vec<Poly> = m.row(src).iter().map(|e| &c * e).collect();
            // Keep the degree bound.
            if row.iter().all(|e| e.degree().to_usize().map_or(true, |k| k <= d)) {
                for (j, e) in row.into_iter().enumerate() {
                    m.set(target, j, e);
                }
            }
        }
        if naive_rank_at(&m, rng.gen_range(0..f.modulus())) == n {
            return m;
        }
    }
}

/// `A B` by schoolbook convolution of every entry pair.
pub fn naive_product(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let f = a.field();
    assert_eq!(a.cols(), b.rows());
    PolyMatrix::from_fn(f, a.rows(), b.cols(), |i, j| {
        let mut acc: Vec<u64> = Vec::new();
        for k in 0..a.cols() {
            let (x, y) = (a.get(i, k).coeffs(), b.get(k, j).coeffs());
            if x.is_empty() || y.is_empty() {
                continue;
            }
            if acc.len() < x.len() + y.len() - 1 {
                acc.resize(x.len() + y.len() - 1, 0);
            }
            for (s, &u) in x.iter().enumerate() {
                for (t, &v) in y.iter().enumerate() {
                    acc[s + t] = f.add(acc[s + t], f.mul(u, v));
                }
            }
        }
        Poly::from_coeffs(f, acc)
    })
}

pub fn annihilates(n: &PolyMatrix, m: &PolyMatrix) -> bool {
    naive_product(n, m).entries().iter().all(Poly::is_zero)
}

/// Rank of `M(a)` by Gaussian elimination on evaluated entries.
pub fn naive_rank_at(m: &PolyMatrix, a: u64) -> usize {
    let f = m.field();
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| horner(f, e, a)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][c]);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest {
            let factor = f.mul(row[c], inv);
            if factor == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        rank += 1;
    }
    rank
}

fn horner(f: PrimeField, p: &Poly, a: u64) -> u64 {
    p.coeffs().iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// The degree-sum bound `r d ⌈log₂ r⌉ + max(0, m - 2r) d` as stated.
pub fn stated_general_bound(m: usize, r: usize, d: usize) -> usize {
    r * d * ceil_log2(r) + m.saturating_sub(2 * r) * d
}

/// The same bound with `⌈log₂(r + 1)⌉` passes, which also covers `r = 1`.
pub fn corrected_general_bound(m: usize, r: usize, d: usize) -> usize {
    r * d * ceil_log2(r + 1) + m.saturating_sub(2 * r) * d
}
