//! Univariate polynomials over exact fields, and factorization over prime
//! fields (square-free, distinct-degree, Cantor-Zassenhaus) and over the
//! rationals (reduction modulo one prime above the Mignotte bound followed by
//! subset recombination; degrees here are tiny, so no Hensel lifting).

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{next_prime_above, BigFp, Field, FiniteField, Rational};

/// Coefficients from low to high degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            ctx: ctx.clone(),
        }
    }

    pub fn from_i64(ctx: &F::Ctx, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| F::from_i64(ctx, c)).collect())
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::new(ctx, vec![F::one(ctx)])
    }

    pub fn x(ctx: &F::Ctx) -> Self {
        Self::new(ctx, vec![F::zero(ctx), F::one(ctx)])
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = F::zero(&self.ctx);
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).unwrap_or(&z).clone() + other.coeffs.get(i).unwrap_or(&z)
            })
            .collect();
        Self::new(&self.ctx, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(
            &self.ctx,
            self.coeffs.iter().map(|c| c.clone() * s).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![F::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a.clone() * b);
            }
        }
        Self::new(&self.ctx, out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let lead_inv = d.lead().expect("division by zero polynomial").inv().unwrap();
        let mut rem = self.coeffs.clone();
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut quot = vec![F::zero(&self.ctx); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(c.clone() * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(&self.ctx, quot), Self::new(&self.ctx, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * F::from_i64(&self.ctx, k as i64))
            .collect();
        Self::new(&self.ctx, c)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inv().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.ctx).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Product of factors with multiplicity, as a monic polynomial.
pub fn expand<F: Field>(ctx: &F::Ctx, factors: &[(Poly<F>, usize)]) -> Poly<F> {
    let mut acc = Poly::one(ctx);
    for (f, k) in factors {
        for _ in 0..*k {
            acc = acc.mul(f);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Finite prime fields

/// Irreducible factorization over a prime field. Factors are monic and
/// sorted by (degree, coefficients); `seed` drives Cantor-Zassenhaus.
pub fn factor_finite<F: FiniteField>(f: &Poly<F>, seed: u64) -> Vec<(Poly<F>, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_finite(&f.monic()) {
        for (g, d) in distinct_degree(&sqf) {
            for h in equal_degree(&g, d, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    sort_factors(&mut out);
    out
}

fn sort_factors<F: Field>(v: &mut [(Poly<F>, usize)]) {
    v.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
}

fn squarefree_finite<F: FiniteField>(f: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let ctx = f.ctx().clone();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if fac.deg() > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if c.deg() > 0 {
        // c is a polynomial in x^p; in a prime field a^(1/p) = a.
        let p = F::characteristic(&ctx)
            .to_usize()
            .expect("p-th powers only arise when p <= degree");
        let root: Vec<F> = c.coeffs().iter().step_by(p).cloned().collect();
        for (g, k) in squarefree_finite(&Poly::new(&ctx, root)) {
            out.push((g, k * p));
        }
    }
    out
}

fn distinct_degree<F: FiniteField>(f: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let ctx = f.ctx().clone();
    let p = F::characteristic(&ctx);
    let x = Poly::x(&ctx);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while g.deg() >= 2 * i {
        h = h.pow_mod(&p, &g);
        let d = g.gcd(&h.sub(&x));
        if d.deg() > 0 {
            g = g.div_exact(&d);
            h = h.rem(&g);
            out.push((d, i));
        }
        i += 1;
    }
    if g.deg() > 0 {
        let d = g.deg();
        out.push((g, d));
    }
    out
}

fn equal_degree<F: FiniteField>(f: &Poly<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<F>> {
    let n = f.deg();
    if n == d {
        return vec![f.monic()];
    }
    let ctx = f.ctx().clone();
    let p = F::characteristic(&ctx);
    let one = Poly::one(&ctx);
    loop {
        let r = Poly::new(&ctx, (0..n).map(|_| F::random(&ctx, rng)).collect());
        if r.deg() == 0 {
            continue;
        }
        let t = if p == BigUint::from(2u32) {
            let mut acc = r.rem(f);
            let mut term = acc.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e = (p.pow(d as u32) - 1u32) / 2u32;
            r.pow_mod(&e, f).sub(&one)
        };
        let u = f.gcd(&t);
        if u.deg() > 0 && u.deg() < n {
            let mut out = equal_degree(&u, d, rng);
            out.extend(equal_degree(&f.div_exact(&u), d, rng));
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Irreducible factorization over the rationals; factors are monic.
pub fn factor_rational(f: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (g, k) in squarefree_char0(&f.monic()) {
        for h in factor_squarefree_rational(&g) {
            out.push((h, k));
        }
    }
    sort_factors(&mut out);
    out
}

/// Yun's square-free decomposition (characteristic zero).
fn squarefree_char0(f: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fp = f.derivative();
    let b = f.gcd(&fp);
    let mut c = f.div_exact(&b);
    let mut d = fp.div_exact(&b).sub(&c.derivative());
    let mut i = 1;
    while c.deg() > 0 {
        let a = c.gcd(&d);
        c = c.div_exact(&a);
        d = d.div_exact(&a).sub(&c.derivative());
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Primitive integer polynomial proportional to `f`.
fn primitive_integer(f: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: Vec<BigInt> = ints.into_iter().map(|c| c / &content).collect();
    if out.last().is_some_and(|l| l.is_negative()) {
        for c in out.iter_mut() {
            *c = -c.clone();
        }
    }
    out
}

fn rational_poly(ints: &[BigInt]) -> Poly<Rational> {
    Poly::new(
        &(),
        ints.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    )
}

fn factor_squarefree_rational(f: &Poly<Rational>) -> Vec<Poly<Rational>> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let mut g = primitive_integer(f);
    let n = g.len() - 1;
    let max_coeff = g.iter().map(|c| c.abs()).max().unwrap();
    let lead = g[n].abs();
    // Mignotte-style bound on lc(g) * (any factor of g).
    let bound: BigInt = (BigInt::one() << n) * BigInt::from(n + 1) * max_coeff * &lead;
    let mut p = next_prime_above(&(bound * 2u32).to_biguint().unwrap());
    let (modulus, modular) = loop {
        let m = Arc::new(p.clone());
        let gp = Poly::new(&m, g.iter().map(|c| BigFp::from_bigint(&m, c)).collect());
        if gp.deg() == n && gp.gcd(&gp.derivative()).deg() == 0 {
            break (m, gp);
        }
        p = next_prime_above(&p);
    };
    let mut remaining: Vec<Poly<BigFp>> = factor_finite(&modular, 0x5eed)
        .into_iter()
        .map(|(h, _)| h)
        .collect();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in combinations(remaining.len(), size) {
            let lc = BigFp::from_bigint(&modulus, g.last().unwrap());
            let mut h = Poly::new(&modulus, vec![lc]);
            for &k in &subset {
                h = h.mul(&remaining[k]);
            }
            let lifted: Vec<BigInt> = h.coeffs().iter().map(BigFp::symmetric).collect();
            let candidate = primitive_integer(&rational_poly(&lifted));
            let (q, r) = rational_poly(&g).divrem(&rational_poly(&candidate));
            if r.is_zero() {
                found.push(rational_poly(&candidate).monic());
                g = primitive_integer(&q);
                for &k in subset.iter().rev() {
                    remaining.remove(k);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    if g.len() > 1 {
        found.push(rational_poly(&g).monic());
    }
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
