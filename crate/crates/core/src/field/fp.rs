use std::fmt;

use crate::ring::Ring;

/// Element of the prime field ℤ/p, stored as its canonical representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    // 128-bit division is a library call; avoid it when the product fits
    if p <= 1 << 32 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        let r = v.rem_euclid(p as i64) as u64;
        Fp { v: r, p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn zero(p: u64) -> Self {
        Fp { v: 0, p }
    }

    pub fn one(p: u64) -> Self {
        Fp { v: 1 % p, p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn random<R: rand::Rng + ?Sized>(p: u64, rng: &mut R) -> Self {
        Fp { v: rng.gen_range(0..p), p }
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(p: u64, rng: &mut R) -> Self {
        Fp { v: rng.gen_range(1..p), p }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp::one(self.p)
    }
    fn from_int(&self, n: i64) -> Self {
        Fp::new(n, self.p)
    }
    fn from_base(&self, c: Fp) -> Self {
        c
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Self {
        let s = self.v + o.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    #[inline]
    fn sub(&self, o: &Self) -> Self {
        let v = if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v };
        Fp { v, p: self.p }
    }
    #[inline]
    fn mul(&self, o: &Self) -> Self {
        Fp { v: mulmod(self.v, o.v, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid in i128 to stay exact for any 64-bit prime
        let (mut r0, mut r1) = (self.p as i128, self.v as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        if r0 != 1 {
            return None;
        }
        Some(Fp { v: s0.rem_euclid(self.p as i128) as u64, p: self.p })
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_field(&self) -> bool {
        true
    }
    fn pth_root(&self) -> Option<Self> {
        Some(*self)
    }
}

/// Finite fields: the prime field and its extensions.
pub trait FiniteField: Ring {
    /// Degree over the prime field.
    fn ext_degree(&self) -> usize;
    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self;
    /// The element when it lies in the prime field.
    fn to_base(&self) -> Option<Fp>;
    /// Canonical coefficient vector, used for ordering.
    fn coords(&self) -> Vec<u64>;
    fn frobenius(&self) -> Self {
        self.pow(self.characteristic())
    }
}

impl FiniteField for Fp {
    fn ext_degree(&self) -> usize {
        1
    }
    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Fp { v: rng.gen_range(0..self.p), p: self.p }
    }
    fn to_base(&self) -> Option<Fp> {
        Some(*self)
    }
    fn coords(&self) -> Vec<u64> {
        vec![self.v]
    }
    fn frobenius(&self) -> Self {
        *self
    }
}
