//! Exact scalar fields: the rationals, word-sized prime fields, and big prime
//! fields (the latter only used internally for factoring over the rationals).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{self, Poly};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// An exact field whose elements can be built from a (possibly trivial)
/// runtime context, such as the modulus of a prime field.
pub trait Field:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    type Ctx: Clone + Debug + Eq + Hash + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// 0 for the rationals.
    fn characteristic(ctx: &Self::Ctx) -> BigUint;
}

/// The fields an algebra can be defined over: these carry a wire format and
/// a polynomial factorization routine.
pub trait GroundField: Field {
    fn spec(ctx: &Self::Ctx) -> FieldSpec;
    fn parse(ctx: &Self::Ctx, s: &str) -> Result<Self, ScalarParseError>;
    /// Small pseudo-random element, used by seeded searches.
    fn sample<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self;
    /// Monic irreducible factors with multiplicities. `f` must be nonzero.
    fn factor(f: &Poly<Self>) -> Vec<(Poly<Self>, usize)>;

    fn to_wire(&self) -> String {
        self.to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("malformed scalar {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("scalar {found:?} does not belong to GF({expected})")]
    WrongModulus { found: String, expected: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0} is not a prime")]
pub struct NotPrime(pub u64);

/// The ground field of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "crate::io::FieldJson", try_from = "crate::io::FieldJson")]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, NotPrime> {
        PrimeModulus::new(p).map(|m| FieldSpec::PrimeField(m.get()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals

impl Field for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn characteristic(_: &()) -> BigUint {
        BigUint::zero()
    }
}

impl GroundField for Rational {
    fn spec(_: &()) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn parse(_: &(), s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        let malformed = || ScalarParseError::Malformed(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| malformed())?;
        let den: BigInt = den.parse().map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(s.to_string()));
        }
        Ok(BigRational::new(num, den))
    }

    fn sample<R: Rng + ?Sized>(_: &(), rng: &mut R) -> Self {
        BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))
    }

    fn factor(f: &Poly<Self>) -> Vec<(Poly<Self>, usize)> {
        poly::factor_rational(f)
    }
}

// ---------------------------------------------------------------------------
// Word-sized prime fields

/// A validated prime modulus below 2^62.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, NotPrime> {
        if p < (1 << 62) && is_prime_u64(p) {
            Ok(PrimeModulus(p))
        } else {
            Err(NotPrime(p))
        }
    }

    pub fn get(&self) -> u64 {
        self.0
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue class modulo a word-sized prime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(ctx: &PrimeModulus, value: u64) -> Self {
        Fp {
            value: value % ctx.0,
            modulus: ctx.0,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u128 + rhs.value as u128;
        Fp {
            value: (s % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Fp {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Fp {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let v = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Fp {
            value: v,
            modulus: self.modulus,
        }
    }
}

macro_rules! forward_ref_ops {
    ($t:ty) => {
        impl<'a> Add<&'a $t> for $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                self + rhs.clone()
            }
        }
        impl<'a> Sub<&'a $t> for $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                self - rhs.clone()
            }
        }
        impl<'a> Mul<&'a $t> for $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                self * rhs.clone()
            }
        }
        impl<'a> AddAssign<&'a $t> for $t {
            fn add_assign(&mut self, rhs: &'a $t) {
                *self = self.clone() + rhs.clone();
            }
        }
        impl<'a> SubAssign<&'a $t> for $t {
            fn sub_assign(&mut self, rhs: &'a $t) {
                *self = self.clone() - rhs.clone();
            }
        }
        impl<'a> MulAssign<&'a $t> for $t {
            fn mul_assign(&mut self, rhs: &'a $t) {
                *self = self.clone() * rhs.clone();
            }
        }
    };
}

forward_ref_ops!(Fp);

impl Field for Fp {
    type Ctx = PrimeModulus;

    fn zero(ctx: &PrimeModulus) -> Self {
        Fp::new(ctx, 0)
    }
    fn one(ctx: &PrimeModulus) -> Self {
        Fp::new(ctx, 1)
    }
    fn from_i64(ctx: &PrimeModulus, n: i64) -> Self {
        let v = n.rem_euclid(ctx.0 as i64) as u64;
        Fp::new(ctx, v)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }
    fn characteristic(ctx: &PrimeModulus) -> BigUint {
        BigUint::from(ctx.0)
    }
}

impl GroundField for Fp {
    fn spec(ctx: &PrimeModulus) -> FieldSpec {
        FieldSpec::PrimeField(ctx.0)
    }

    /// Accepts `"r mod p"` (p must match) and bare integers, which are reduced.
    fn parse(ctx: &PrimeModulus, s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        let (r, p) = match t.split_once("mod") {
            Some((r, p)) => (r.trim(), Some(p.trim())),
            None => (t, None),
        };
        if let Some(p) = p {
            let p: u64 = p
                .parse()
                .map_err(|_| ScalarParseError::Malformed(s.to_string()))?;
            if p != ctx.0 {
                return Err(ScalarParseError::WrongModulus {
                    found: s.to_string(),
                    expected: ctx.0,
                });
            }
        }
        let r: BigInt = r
            .parse()
            .map_err(|_| ScalarParseError::Malformed(s.to_string()))?;
        let v = r.mod_floor(&BigInt::from(ctx.0)).to_u64().unwrap_or(0);
        Ok(Fp::new(ctx, v))
    }

    fn sample<R: Rng + ?Sized>(ctx: &PrimeModulus, rng: &mut R) -> Self {
        Fp::new(ctx, rng.gen_range(0..ctx.0))
    }

    fn factor(f: &Poly<Self>) -> Vec<(Poly<Self>, usize)> {
        poly::factor_finite(f, 0x5eed)
    }
}

// ---------------------------------------------------------------------------
// Big prime fields

/// Residue class modulo an arbitrary-size prime. The modulus is shared.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BigFp {
    value: BigUint,
    modulus: Arc<BigUint>,
}

impl BigFp {
    pub fn new(modulus: &Arc<BigUint>, value: BigUint) -> Self {
        BigFp {
            value: value % modulus.as_ref(),
            modulus: modulus.clone(),
        }
    }

    pub fn from_bigint(modulus: &Arc<BigUint>, value: &BigInt) -> Self {
        let m = BigInt::from(modulus.as_ref().clone());
        let v = value.mod_floor(&m).to_biguint().unwrap_or_default();
        BigFp {
            value: v,
            modulus: modulus.clone(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Representative in (-p/2, p/2].
    pub fn symmetric(&self) -> BigInt {
        let v = BigInt::from(self.value.clone());
        let m = BigInt::from(self.modulus.as_ref().clone());
        if &v * 2 > m {
            v - m
        } else {
            v
        }
    }
}

impl Display for BigFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Add for BigFp {
    type Output = BigFp;
    fn add(self, rhs: BigFp) -> BigFp {
        let mut v = self.value + rhs.value;
        if v >= *self.modulus {
            v -= self.modulus.as_ref();
        }
        BigFp {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl Sub for BigFp {
    type Output = BigFp;
    fn sub(self, rhs: BigFp) -> BigFp {
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus.as_ref() - (rhs.value - self.value)
        };
        BigFp {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl Mul for BigFp {
    type Output = BigFp;
    fn mul(self, rhs: BigFp) -> BigFp {
        BigFp {
            value: (self.value * rhs.value) % self.modulus.as_ref(),
            modulus: self.modulus,
        }
    }
}

impl Neg for BigFp {
    type Output = BigFp;
    fn neg(self) -> BigFp {
        let v = if self.value.is_zero() {
            self.value
        } else {
            self.modulus.as_ref() - self.value
        };
        BigFp {
            value: v,
            modulus: self.modulus,
        }
    }
}

forward_ref_ops!(BigFp);

impl Field for BigFp {
    type Ctx = Arc<BigUint>;

    fn zero(ctx: &Arc<BigUint>) -> Self {
        BigFp::new(ctx, BigUint::zero())
    }
    fn one(ctx: &Arc<BigUint>) -> Self {
        BigFp::new(ctx, BigUint::one())
    }
    fn from_i64(ctx: &Arc<BigUint>, n: i64) -> Self {
        BigFp::from_bigint(ctx, &BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn is_one(&self) -> bool {
        self.value.is_one()
    }
    fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let e = self.modulus.as_ref() - BigUint::from(2u32);
        Some(BigFp {
            value: self.value.modpow(&e, &self.modulus),
            modulus: self.modulus.clone(),
        })
    }
    fn characteristic(ctx: &Arc<BigUint>) -> BigUint {
        ctx.as_ref().clone()
    }
}

/// Finite prime fields, as needed by Cantor-Zassenhaus.
pub trait FiniteField: Field {
    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self;
}

impl FiniteField for Fp {
    fn random<R: Rng + ?Sized>(ctx: &PrimeModulus, rng: &mut R) -> Self {
        Fp::new(ctx, rng.gen_range(0..ctx.0))
    }
}

impl FiniteField for BigFp {
    fn random<R: Rng + ?Sized>(ctx: &Arc<BigUint>, rng: &mut R) -> Self {
        let bytes = (ctx.bits() as usize / 8) + 8;
        let raw: Vec<u8> = (0..bytes).map(|_| rng.gen()).collect();
        BigFp::new(ctx, BigUint::from_bytes_le(&raw))
    }
}

/// Miller-Rabin with the first 20 prime bases (deterministic below 3.3e24,
/// probabilistic beyond that).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut r = 0u32;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for b in BASES {
        let b = BigUint::from(b);
        if (n % &b).is_zero() {
            return false;
        }
        let mut x = b.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        let mut composite = true;
        for _ in 1..r {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                composite = false;
                break;
            }
        }
        if composite {
            return false;
        }
    }
    true
}

/// Smallest probable prime strictly above `n`.
pub fn next_prime_above(n: &BigUint) -> BigUint {
    let mut c = n + 1u32;
    if c.is_even() && c > BigUint::from(2u32) {
        c += 1u32;
    }
    while !is_probable_prime(&c) {
        c += 2u32;
    }
    c
}
