//! Dense univariate polynomials over a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::Result;
use crate::field::{FieldElement, PrimeField};

/// Degrees at or above this length switch from schoolbook to Karatsuba.
const KARATSUBA_CROSSOVER: usize = 32;

/// The degree of a polynomial, or of a row or matrix of polynomials.
///
/// The zero polynomial has degree [`Degree::NEG_INF`], which compares below
/// every finite degree and absorbs offsets and sums.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(i64);

impl Degree {
    pub const NEG_INF: Degree = Degree(i64::MIN);

    pub const fn new(d: i64) -> Degree {
        Degree(d)
    }

    pub const fn finite(d: usize) -> Degree {
        Degree(d as i64)
    }

    pub fn is_finite(self) -> bool {
        self != Degree::NEG_INF
    }

    /// The raw value; `i64::MIN` for `NEG_INF`.
    pub fn as_i64(self) -> i64 {
        self.0
    }

    /// The value as a length-style count, `None` for `NEG_INF` or negatives.
    pub fn to_usize(self) -> Option<usize> {
        usize::try_from(self.0).ok()
    }

    /// Adds a finite offset; `NEG_INF` stays `NEG_INF`.
    pub fn offset(self, k: i64) -> Degree {
        if self.is_finite() {
            Degree(self.0 + k)
        } else {
            self
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        if self.is_finite() && rhs.is_finite() {
            Degree(self.0 + rhs.0)
        } else {
            Degree::NEG_INF
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("-inf")
        }
    }
}

/// A polynomial with coefficients in ascending powers.
///
/// The coefficient vector is always normalized: its last entry is nonzero,
/// and the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero(field: PrimeField) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: PrimeField, c: u64, k: usize) -> Poly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(field, coeffs)
    }

    /// The polynomial `x`.
    pub fn x(field: PrimeField) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// Builds a polynomial from arbitrary `u64` coefficients, reducing them.
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<u64>) -> Poly {
        for c in coeffs.iter_mut() {
            *c = field.reduce(*c);
        }
        Poly::from_raw(field, coeffs)
    }

    /// Builds a polynomial from signed coefficients.
    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Poly {
        Poly::from_raw(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Wraps coefficients that are already canonical.
    pub(crate) fn from_raw(field: PrimeField, mut coeffs: Vec<u64>) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// A random polynomial of degree at most `max_degree` with uniform
    /// coefficients.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, max_degree: usize, rng: &mut R) -> Poly {
        let coeffs = (0..=max_degree).map(|_| field.random(rng)).collect();
        Poly::from_raw(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// The coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// The leading coefficient, zero for the zero polynomial.
    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NEG_INF,
            n => Degree::finite(n - 1),
        }
    }

    /// Number of stored coefficients, `deg + 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Same as [`Poly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.field.ensure_same(&other.field)?;
        let f = self.field;
        let (long, short) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = f.add(*c, s);
        }
        Ok(Poly::from_raw(f, coeffs))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.field.ensure_same(&other.field)?;
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.field.ensure_same(&other.field)?;
        Ok(Poly::from_raw(
            self.field,
            mul_coeffs(self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        let c = f.reduce(c);
        Poly::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field,
            coeffs,
        }
    }

    /// `self mod x^k`.
    pub fn truncate(&self, k: usize) -> Poly {
        let k = k.min(self.len());
        Poly::from_raw(self.field, self.coeffs[..k].to_vec())
    }

    /// The polynomial `g(x) = f(x + x0)`.
    pub fn shift_var(&self, x0: u64) -> Poly {
        let f = self.field;
        let x0 = f.reduce(x0);
        if x0 == 0 || self.len() <= 1 {
            return self.clone();
        }
        // Horner in the ring: g = (...(c_n)(x + x0) + c_{n-1})(x + x0) + ...
        let n = self.len();
        let mut g = vec![0u64; n];
        for (step, &c) in self.coeffs.iter().rev().enumerate() {
            // g currently holds `step` meaningful coefficients.
            for k in (1..=step).rev() {
                g[k] = f.add(g[k - 1], f.mul(g[k], x0));
            }
            g[0] = f.add(f.mul(g[0], x0), c);
        }
        Poly::from_raw(f, g)
    }

    /// Horner evaluation at `a`.
    pub fn eval(&self, a: u64) -> u64 {
        let f = self.field;
        let a = f.reduce(a);
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    pub fn eval_element(&self, a: FieldElement) -> FieldElement {
        self.field.element(self.eval(a.value()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial modulus mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial modulus mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial modulus mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Product of two canonical coefficient slices, not normalized.
pub(crate) fn mul_coeffs(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    mul_into(f, a, b, &mut out);
    out
}

/// Adds `a * b` into `out`, which must hold `a.len() + b.len() - 1` entries.
fn mul_into(f: PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() < KARATSUBA_CROSSOVER {
        schoolbook_into(f, short, long, out);
    } else if 2 * short.len() <= long.len() {
        // Unbalanced: cut the long operand into pieces of the short length.
        for (i, chunk) in long.chunks(short.len()).enumerate() {
            let off = i * short.len();
            mul_into(f, short, chunk, &mut out[off..off + short.len() + chunk.len() - 1]);
        }
    } else {
        karatsuba_into(f, a, b, out);
    }
}

fn schoolbook_into(f: PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (slot, &bj) in acc[i..].iter_mut().zip(b) {
            *slot += u128::from(ai * bj);
        }
    }
    for (o, s) in out.iter_mut().zip(acc) {
        *o = f.add(*o, f.reduce_wide(s));
    }
}

fn karatsuba_into(f: PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    let m = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = mul_coeffs(f, a0, b0);
    let z2 = mul_coeffs(f, a1, b1);
    let sum = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut s = x.to_vec();
        s.resize(x.len().max(y.len()), 0);
        for (si, &yi) in s.iter_mut().zip(y) {
            *si = f.add(*si, yi);
        }
        s
    };
    let mut z1 = mul_coeffs(f, &sum(a0, a1), &sum(b0, b1));
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    for (i, &c) in z0.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    for (i, &c) in z1.iter().enumerate() {
        // High terms of z1 cancel exactly and may run past the output.
        if let Some(o) = out.get_mut(m + i) {
            *o = f.add(*o, c);
        } else {
            debug_assert_eq!(c, 0);
        }
    }
    for (i, &c) in z2.iter().enumerate() {
        out[2 * m + i] = f.add(out[2 * m + i], c);
    }
}
