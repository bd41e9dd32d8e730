use std::fmt;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The prime used when no field is requested explicitly.
pub const DEFAULT_PRIME: u64 = 32003;

/// Serializable description of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large; primes must be below 2^31")]
    PrimeTooLarge(u64),
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { text: String, field: FieldSpec },
}

/// A pivot row of an echelon form: `row[col] == 1`, zero before `col`, and
/// zero from `end` onwards.
#[derive(Clone, Debug, PartialEq)]
pub struct Pivot<E> {
    pub col: usize,
    pub end: usize,
    pub row: Vec<E>,
}

/// Arithmetic in a coefficient field together with the few vector kernels
/// that dominate the running time of elimination.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError>;
    fn render(&self, a: &Self::Elem) -> String;

    /// Number of elements; `None` for infinite fields.
    fn order(&self) -> Option<u64>;

    /// The `i`-th element in a fixed enumeration (finite fields only).
    fn nth(&self, i: u64) -> Self::Elem {
        self.from_i64(i as i64)
    }

    /// A random element. Infinite fields draw small integers.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `y += a * x`.
    fn axpy(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem]) {
        if self.is_zero(a) {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            if !self.is_zero(xi) {
                *yi = self.add(yi, &self.mul(a, xi));
            }
        }
    }

    /// Clears `v` at every pivot column by subtracting multiples of the pivot
    /// rows. `pivots` must be sorted by column.
    fn reduce(&self, v: &mut [Self::Elem], pivots: &[Pivot<Self::Elem>]) {
        for p in pivots {
            let c = v[p.col].clone();
            if self.is_zero(&c) {
                continue;
            }
            let f = self.neg(&c);
            self.axpy(&mut v[p.col..p.end], &f, &p.row[p.col..p.end]);
        }
    }
}

/// The prime field GF(p) for a prime p < 2^31, elements stored as `u32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    #[inline]
    fn lazy_ok(&self) -> bool {
        self.p < (1 << 16)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME as u32 }
    }
}

#[inline(always)]
fn axpy_lazy_body(dst: &mut [u64], f: u64, src: &[u32]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.wrapping_add(f.wrapping_mul(*s as u64));
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn axpy_lazy_avx2(dst: &mut [u64], f: u64, src: &[u32]) {
    axpy_lazy_body(dst, f, src)
}

// Accumulates without reduction; callers keep the number of updates per entry
// below 2^31 with p < 2^16 so nothing wraps.
#[inline]
fn axpy_lazy(dst: &mut [u64], f: u64, src: &[u32]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            unsafe { axpy_lazy_avx2(dst, f, src) };
            return;
        }
    }
    axpy_lazy_body(dst, f, src)
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p as u64)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let p = self.p as u64;
        let mut base = *a as u64 % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Some(acc as u32)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn parse(&self, text: &str) -> Result<u32, FieldError> {
        let t = text.trim();
        let err = || FieldError::Parse {
            text: text.to_string(),
            field: self.spec(),
        };
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            let p = BigInt::from(self.p);
            let n = ((n % &p) + &p) % &p;
            let d = ((d % &p) + &p) % &p;
            let n: u32 = n.try_into().map_err(|_| err())?;
            let d: u32 = d.try_into().map_err(|_| err())?;
            let di = self.inv(&d).ok_or_else(err)?;
            return Ok(self.mul(&n, &di));
        }
        let v: BigInt = t.parse().map_err(|_| err())?;
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        r.try_into().map_err(|_| err())
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn nth(&self, i: u64) -> u32 {
        (i % self.p as u64) as u32
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn axpy(&self, y: &mut [u32], a: &u32, x: &[u32]) {
        if *a == 0 {
            return;
        }
        let p = self.p as u64;
        let a = *a as u64;
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = ((*yi as u64 + a * *xi as u64) % p) as u32;
        }
    }

    fn reduce(&self, v: &mut [u32], pivots: &[Pivot<u32>]) {
        if pivots.is_empty() {
            return;
        }
        let p = self.p as u64;
        if !self.lazy_ok() {
            for piv in pivots {
                let c = v[piv.col];
                if c == 0 {
                    continue;
                }
                let f = self.neg(&c);
                self.axpy(&mut v[piv.col..piv.end], &f, &piv.row[piv.col..piv.end]);
            }
            return;
        }
        let mut acc: Vec<u64> = v.iter().map(|&x| x as u64).collect();
        for piv in pivots {
            let m = acc[piv.col] % p;
            if m == 0 {
                continue;
            }
            axpy_lazy(&mut acc[piv.col..piv.end], p - m, &piv.row[piv.col..piv.end]);
        }
        for (x, a) in v.iter_mut().zip(&acc) {
            *x = (a % p) as u32;
        }
    }
}

/// The rational numbers with arbitrary-precision normalized fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse(&self, text: &str) -> Result<BigRational, FieldError> {
        let t = text.trim();
        let err = || FieldError::Parse {
            text: text.to_string(),
            field: FieldSpec::Rationals,
        };
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        } else {
            let n: BigInt = t.parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
    }
    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-8..=8))
    }

    fn axpy(&self, y: &mut [BigRational], a: &BigRational, x: &[BigRational]) {
        if a.is_zero() {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            if !xi.is_zero() {
                *yi += a * xi;
            }
        }
    }
}
