use std::fmt;
use std::sync::Arc;

use super::fp::{mulmod, Fp, FiniteField};
use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::ring::Ring;

/// 𝔽_{p^e} presented as 𝔽_p[z]/(m(z)) with m monic irreducible of degree e.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldContext {
    p: u64,
    modulus: Vec<u64>,
}

/// Element of an extension field: coefficients of a residue of degree < e.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    c: Vec<u64>,
}

fn vec_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn vec_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = mulmod(x, y, p);
            let s = out[i + j] + t;
            out[i + j] = if s >= p { s - p } else { s };
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn vec_rem_monic(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let top = a.pop().unwrap();
        if top == 0 {
            continue;
        }
        let base = a.len() - dm;
        for k in 0..dm {
            let t = mulmod(top, m[k], p);
            a[base + k] = (a[base + k] + p - t) % p;
        }
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    Fp::from_u64(a, p).inv().expect("nonzero").value()
}

/// Remainder with arbitrary nonzero leading coefficient.
fn vec_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    vec_trim(&mut r);
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let top = r.pop().unwrap();
        if top == 0 {
            continue;
        }
        let f = mulmod(top, li, p);
        let base = r.len() - db;
        q[base] = f;
        for k in 0..db {
            let t = mulmod(f, b[k], p);
            r[base + k] = (r[base + k] + p - t) % p;
        }
    }
    vec_trim(&mut r);
    (q, r)
}

impl FieldContext {
    /// The prime field itself (e = 1, defining polynomial z).
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        if !super::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Arc::new(FieldContext { p, modulus: vec![0, 1] }))
    }

    /// Context from an explicit defining polynomial (ascending coefficients).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !super::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let poly = UPoly::new(modulus.iter().map(|&c| Fp::from_u64(c, p)).collect(), Fp::zero(p));
        if poly.degree() < 1 || !poly.lead().is_one() {
            return Err(Error::NotMonic);
        }
        if !super::roots::is_irreducible(&poly) {
            return Err(Error::Invalid("defining polynomial is reducible".into()));
        }
        Ok(Arc::new(FieldContext { p, modulus: modulus.iter().map(|c| c % p).collect() }))
    }

    /// Degree-e extension whose defining polynomial comes from a seeded search.
    pub fn random<R: rand::Rng + ?Sized>(p: u64, e: usize, rng: &mut R) -> Result<Arc<Self>> {
        if e == 1 {
            return Self::prime(p);
        }
        if !super::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        loop {
            let mut m: Vec<u64> = (0..e).map(|_| rng.gen_range(0..p)).collect();
            m.push(1);
            let poly = UPoly::new(m.iter().map(|&c| Fp::from_u64(c, p)).collect(), Fp::zero(p));
            if super::roots::is_irreducible(&poly) {
                return Ok(Arc::new(FieldContext { p, modulus: m }));
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree() as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { ctx: self.clone(), c: vec![0; self.degree()] }
    }

    pub fn from_base(self: &Arc<Self>, a: Fp) -> FieldElement {
        let mut c = vec![0; self.degree()];
        c[0] = a.value() % self.p;
        FieldElement { ctx: self.clone(), c }
    }

    /// Element with the given coefficient vector (reduced modulo the defining polynomial).
    pub fn element(self: &Arc<Self>, coeffs: &[u64]) -> FieldElement {
        let v: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        let mut r = vec_rem_monic(v, &self.modulus, self.p);
        r.resize(self.degree(), 0);
        FieldElement { ctx: self.clone(), c: r }
    }

    /// The class of z, a root of the defining polynomial.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        self.element(&[0, 1])
    }

    /// Element with index `k` in base-p digit order; enumerates the field.
    pub fn nth(self: &Arc<Self>, mut k: u128) -> FieldElement {
        let mut c = vec![0u64; self.degree()];
        for slot in c.iter_mut() {
            *slot = (k % self.p as u128) as u64;
            k /= self.p as u128;
        }
        FieldElement { ctx: self.clone(), c }
    }
}

impl FieldElement {
    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    fn with(&self, c: Vec<u64>) -> Self {
        FieldElement { ctx: self.ctx.clone(), c }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx)
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        self.with(vec![0; self.c.len()])
    }
    fn one_like(&self) -> Self {
        let mut c = vec![0; self.c.len()];
        c[0] = 1 % self.ctx.p;
        self.with(c)
    }
    fn from_int(&self, n: i64) -> Self {
        let mut c = vec![0; self.c.len()];
        c[0] = Fp::new(n, self.ctx.p).value();
        self.with(c)
    }
    fn from_base(&self, a: Fp) -> Self {
        let mut c = vec![0; self.c.len()];
        c[0] = a.value() % self.ctx.p;
        self.with(c)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.ctx.p;
        self.with(self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % p).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.ctx.p;
        self.with(self.c.iter().zip(&o.c).map(|(a, b)| (a + p - b) % p).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.ctx.p;
        if self.c.len() == 1 {
            return self.with(vec![mulmod(self.c[0], o.c[0], p)]);
        }
        let mut r = vec_rem_monic(vec_mul(&self.c, &o.c, p), &self.ctx.modulus, p);
        r.resize(self.c.len(), 0);
        self.with(r)
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = self.ctx.p;
        let e = self.c.len();
        let add = |x: u64, y: u64| if x + y >= p { x + y - p } else { x + y };
        if e == 1 {
            self.c[0] = add(self.c[0], mulmod(a.c[0], b.c[0], p));
            return;
        }
        const CAP: usize = 64;
        if 2 * e - 1 > CAP {
            *self = self.add(&a.mul(b));
            return;
        }
        let mut buf = [0u64; CAP];
        let m = &self.ctx.modulus;
        let small = (p - 1).checked_mul(p - 1).and_then(|s| s.checked_mul(4 * e as u64)).is_some();
        if small {
            // lazy reduction: every cell stays below 4e·(p−1)²
            for (i, &x) in a.c.iter().enumerate() {
                for (j, &y) in b.c.iter().enumerate() {
                    buf[i + j] += x * y;
                }
            }
            for top in (e..2 * e - 1).rev() {
                let t = buf[top] % p;
                if t == 0 {
                    continue;
                }
                for k in 0..e {
                    buf[top - e + k] += t * if m[k] == 0 { 0 } else { p - m[k] };
                }
            }
            for (c, &x) in self.c.iter_mut().zip(&buf[..e]) {
                *c = add(*c, x % p);
            }
            return;
        }
        if p <= 1 << 32 {
            // same scheme with 128-bit cells
            let mut wide = [0u128; CAP];
            for (i, &x) in a.c.iter().enumerate() {
                for (j, &y) in b.c.iter().enumerate() {
                    wide[i + j] += u128::from(x * y);
                }
            }
            for top in (e..2 * e - 1).rev() {
                let t = (wide[top] % u128::from(p)) as u64;
                if t == 0 {
                    continue;
                }
                for k in 0..e {
                    wide[top - e + k] += u128::from(t * if m[k] == 0 { 0 } else { p - m[k] });
                }
            }
            for (c, &x) in self.c.iter_mut().zip(&wide[..e]) {
                *c = add(*c, (x % u128::from(p)) as u64);
            }
            return;
        }
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                buf[i + j] = add(buf[i + j], mulmod(x, y, p));
            }
        }
        for top in (e..2 * e - 1).rev() {
            let t = buf[top];
            if t == 0 {
                continue;
            }
            for k in 0..e {
                let s = mulmod(t, m[k], p);
                let cell = &mut buf[top - e + k];
                *cell = if *cell >= s { *cell - s } else { *cell + p - s };
            }
        }
        for (c, &x) in self.c.iter_mut().zip(&buf[..e]) {
            *c = add(*c, x);
        }
    }
    fn neg(&self) -> Self {
        let p = self.ctx.p;
        self.with(self.c.iter().map(|&a| (p - a) % p).collect())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.ctx.p;
        // extended Euclid on (modulus, self)
        let mut r0 = self.ctx.modulus.clone();
        let mut r1 = self.c.clone();
        vec_trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = vec_divrem(&r0, &r1, p);
            let qs = vec_mul(&q, &s1, p);
            let mut ns = vec![0u64; s0.len().max(qs.len())];
            for (i, x) in s0.iter().enumerate() {
                ns[i] = *x;
            }
            for (i, x) in qs.iter().enumerate() {
                ns[i] = (ns[i] + p - x) % p;
            }
            vec_trim(&mut ns);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, ns);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let li = inv_mod(r0[0], p);
        let mut out: Vec<u64> = s0.iter().map(|&x| mulmod(x, li, p)).collect();
        out = vec_rem_monic(out, &self.ctx.modulus, p);
        out.resize(self.c.len(), 0);
        Some(self.with(out))
    }
    fn characteristic(&self) -> u64 {
        self.ctx.p
    }
    fn is_field(&self) -> bool {
        true
    }
    fn pth_root(&self) -> Option<Self> {
        // x^(p^(e-1)) inverts Frobenius
        let mut x = self.clone();
        for _ in 1..self.c.len() {
            x = x.pow(self.ctx.p);
        }
        Some(x)
    }
}

impl FiniteField for FieldElement {
    fn ext_degree(&self) -> usize {
        self.c.len()
    }
    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let p = self.ctx.p;
        self.with((0..self.c.len()).map(|_| rng.gen_range(0..p)).collect())
    }
    fn to_base(&self) -> Option<Fp> {
        if self.c[1..].iter().all(|&x| x == 0) {
            Some(Fp::from_u64(self.c[0], self.ctx.p))
        } else {
            None
        }
    }
    fn coords(&self) -> Vec<u64> {
        self.c.clone()
    }
}
