//! Polynomial matrix products: direct convolution and evaluation/interpolation
//! on the grid `0, 1, ..., D`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;

use super::constant::mul_raw;
use super::PolyMatrix;

/// How a product is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulStrategy {
    /// Pick the cheaper method from an operation count estimate.
    Auto,
    /// Entrywise polynomial convolution.
    Convolution,
    /// Evaluation at `D + 1` points, pointwise products, interpolation.
    EvalInterp,
}

/// `A * B` with the given strategy.
pub fn mul_with(a: &PolyMatrix, b: &PolyMatrix, strategy: MulStrategy) -> Result<PolyMatrix> {
    a.field().ensure_same(&b.field())?;
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (Some(da), Some(db)) = (a.degree().to_usize(), b.degree().to_usize()) else {
        return Ok(PolyMatrix::zeros(a.field(), a.rows(), b.cols()));
    };
    let points = da + db + 1;
    let fits = (points as u64) <= a.field().modulus();
    match strategy {
        MulStrategy::Convolution => Ok(convolution(a, b, da, db)),
        MulStrategy::EvalInterp if !fits => Err(Error::FieldTooSmall {
            p: a.field().modulus(),
            needed: points as u64,
        }),
        MulStrategy::EvalInterp => Ok(eval_interp(a, b, da, db)),
        MulStrategy::Auto => {
            let (m, k, n) = (a.rows() as f64, a.cols() as f64, b.cols() as f64);
            let (la, lb, np) = ((da + 1) as f64, (db + 1) as f64, points as f64);
            let conv = m * k * n * la * lb;
            let eval = np * (m * k * la + k * n * lb + m * k * n + m * n * np);
            if fits && eval < conv {
                Ok(eval_interp(a, b, da, db))
            } else {
                Ok(convolution(a, b, da, db))
            }
        }
    }
}

fn convolution(a: &PolyMatrix, b: &PolyMatrix, da: usize, db: usize) -> PolyMatrix {
    let f = a.field();
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    let mut acc = vec![0u128; da + db + 1];
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            acc.iter_mut().for_each(|s| *s = 0);
            for l in 0..k {
                let (x, y) = (a.get(i, l).coeffs(), b.get(l, j).coeffs());
                for (s, &xs) in x.iter().enumerate() {
                    if xs == 0 {
                        continue;
                    }
                    for (slot, &yu) in acc[s..].iter_mut().zip(y) {
                        *slot += u128::from(xs * yu);
                    }
                }
            }
            let coeffs = acc.iter().map(|&s| f.reduce_wide(s)).collect();
            entries.push(Poly::from_raw(f, coeffs));
        }
    }
    PolyMatrix::from_polys(f, m, n, entries)
}

/// Coefficient slab: row `s` holds the `x^s` coefficients of every entry.
fn coefficient_slab(a: &PolyMatrix, len: usize) -> Vec<u64> {
    let width = a.rows() * a.cols();
    let mut slab = vec![0u64; len * width];
    for (e, p) in a.entries().iter().enumerate() {
        for (s, &c) in p.coeffs().iter().enumerate() {
            slab[s * width + e] = c;
        }
    }
    slab
}

fn eval_interp(a: &PolyMatrix, b: &PolyMatrix, da: usize, db: usize) -> PolyMatrix {
    let f = a.field();
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    let np = da + db + 1;
    let vander = vandermonde(f, np, da.max(db) + 1);
    let vcols = da.max(db) + 1;

    // Evaluations: row t is the matrix at point t.
    let eval = |mat: &PolyMatrix, len: usize| {
        let width = mat.rows() * mat.cols();
        let slab = coefficient_slab(mat, len);
        let v: Vec<u64> = (0..np)
            .flat_map(|t| vander[t * vcols..t * vcols + len].iter().copied())
            .collect();
        let mut out = vec![0u64; np * width];
        mul_raw(f, &v, &slab, np, len, width, &mut out);
        out
    };
    let ea = eval(a, da + 1);
    let eb = eval(b, db + 1);

    let mut prod = vec![0u64; np * m * n];
    for t in 0..np {
        mul_raw(
            f,
            &ea[t * m * k..(t + 1) * m * k],
            &eb[t * k * n..(t + 1) * k * n],
            m,
            k,
            n,
            &mut prod[t * m * n..(t + 1) * m * n],
        );
    }

    let inv = inverse_vandermonde(f, np);
    let mut coeffs = vec![0u64; np * m * n];
    mul_raw(f, &inv, &prod, np, np, m * n, &mut coeffs);
    let entries = (0..m * n)
        .map(|e| Poly::from_raw(f, (0..np).map(|s| coeffs[s * m * n + e]).collect()))
        .collect();
    PolyMatrix::from_polys(f, m, n, entries)
}

/// `V[t][s] = t^s` for `t < points`, `s < len`.
fn vandermonde(f: PrimeField, points: usize, len: usize) -> Vec<u64> {
    let mut v = vec![0u64; points * len];
    for t in 0..points {
        let mut pw = 1 % f.modulus();
        for s in 0..len {
            v[t * len + s] = pw;
            pw = f.mul(pw, t as u64);
        }
    }
    v
}

/// Inverse of the Vandermonde matrix on `0, ..., points - 1`: entry `[s][t]`
/// is the `x^s` coefficient of the Lagrange basis polynomial for point `t`.
fn inverse_vandermonde(f: PrimeField, points: usize) -> Vec<u64> {
    let d = points - 1;
    // master(x) = prod_{u <= d} (x - u)
    let mut master = vec![1u64];
    for u in 0..points {
        let mut next = vec![0u64; master.len() + 1];
        for (s, &c) in master.iter().enumerate() {
            next[s + 1] = f.add(next[s + 1], c);
            next[s] = f.sub(next[s], f.mul(c, u as u64));
        }
        master = next;
    }
    let mut fact = vec![1u64; points];
    for i in 1..points {
        fact[i] = f.mul(fact[i - 1], i as u64);
    }
    let mut inv = vec![0u64; points * points];
    let mut quot = vec![0u64; points];
    for t in 0..points {
        // quot = master / (x - t) by synthetic division.
        quot[d] = master[points];
        for s in (0..d).rev() {
            quot[s] = f.add(master[s + 1], f.mul(t as u64, quot[s + 1]));
        }
        // prod_{u != t} (t - u) = t! * (-1)^(d - t) * (d - t)!
        let mut denom = f.mul(fact[t], fact[d - t]);
        if (d - t) % 2 == 1 {
            denom = f.neg(denom);
        }
        let w = f.inv(denom);
        for s in 0..points {
            inv[s * points + t] = f.mul(quot[s], w);
        }
    }
    inv
}
