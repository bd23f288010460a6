//! Arithmetic in a prime field `F_p` with `p < 2^32`.
//!
//! Elements are stored as canonical `u64` representatives in `[0, p)`. The
//! modulus bound keeps every product of two elements inside a `u64`, so a
//! product is reduced with a single Barrett step and long dot products can be
//! accumulated in a `u128` and reduced once.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// The default modulus, `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A prime modulus together with its reduction constants.
#[derive(Clone, Copy)]
pub struct PrimeField {
    p: u64,
    /// `floor(2^64 / p)`.
    barrett: u64,
    /// `2^64 mod p`.
    r64: u64,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::new(DEFAULT_PRIME).expect("default prime is valid")
    }
}

impl PrimeField {
    /// Builds the field `F_p`, verifying that `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 32).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let barrett = (u128::from(u64::MAX) + 1) / u128::from(p);
        let r64 = ((u128::from(u64::MAX) + 1) % u128::from(p)) as u64;
        Ok(PrimeField {
            p,
            barrett: barrett as u64,
            r64,
        })
    }

    /// Builds `F_p` and additionally rejects moduli too small to multiply
    /// polynomials of degree up to `max_degree` by evaluation and
    /// interpolation, i.e. `p < 2 * max_degree + 3`.
    pub fn with_interpolation_budget(p: u64, max_degree: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let needed = 2 * max_degree + 3;
        if p < needed {
            return Err(Error::FieldTooSmall { p, needed });
        }
        Ok(field)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Checks that two values live in the same field.
    pub fn ensure_same(&self, other: &PrimeField) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    /// Reduces an arbitrary `u64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    /// Reduces a `u128` accumulator.
    #[inline]
    pub fn reduce_wide(&self, x: u128) -> u64 {
        let lo = self.reduce(x as u64);
        let hi = self.reduce((x >> 64) as u64);
        self.add(lo, self.reduce(hi * self.r64))
    }

    /// Maps a signed integer to its canonical representative.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = self.reduce(x.unsigned_abs());
        if x < 0 {
            self.neg(r)
        } else {
            r
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// # Panics
    /// If `a` is zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "zero is not invertible in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.from_i64(t0)
    }

    /// A uniformly random element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    /// Wraps a canonical value as a [`FieldElement`].
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            field: *self,
        }
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((u128::from(a) * u128::from(b)) % u128::from(n)) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of `F_p` carrying its field.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<FieldElement> {
        (self.value != 0).then(|| FieldElement {
            value: self.field.inv(self.value),
            field: self.field,
        })
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! element_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "field element modulus mismatch");
                FieldElement {
                    value: self.field.$method(self.value, rhs.value),
                    field: self.field,
                }
            }
        }
    };
}

element_binop!(Add, add);
element_binop!(Sub, sub);
element_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}
