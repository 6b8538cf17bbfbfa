//! Multivariate power series truncated at a total degree.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// Monomials in r variables of total degree ≤ κ, listed by degree.
///
/// The listing of degree-t monomials does not depend on κ, so the table for
/// a smaller bound is a prefix of the table for a larger one.
pub struct MonoTable {
    r: usize,
    kappa: u32,
    exps: Vec<Vec<u32>>,
    degs: Vec<u32>,
    /// `start[t]` = number of monomials of degree < t.
    start: Vec<usize>,
    enc: Vec<usize>,
    index: Index,
}

enum Index {
    Dense(Vec<u32>),
    Sparse(HashMap<usize, u32>),
}

impl MonoTable {
    fn build(r: usize, kappa: u32) -> Self {
        let base = kappa as usize + 1;
        let mut exps = Vec::new();
        let mut degs = Vec::new();
        let mut start = Vec::new();
        for t in 0..=kappa {
            start.push(exps.len());
            let mut cur = vec![0u32; r];
            compositions(t, 0, &mut cur, &mut exps);
            degs.resize(exps.len(), t);
        }
        start.push(exps.len());
        let enc: Vec<usize> = exps.iter().map(|e| e.iter().rev().fold(0usize, |acc, &k| acc * base + k as usize)).collect();
        let span = base.checked_pow(r as u32).filter(|&s| s <= 1 << 24);
        let index = match span {
            Some(s) => {
                let mut v = vec![u32::MAX; s];
                for (i, &x) in enc.iter().enumerate() {
                    v[x] = i as u32;
                }
                Index::Dense(v)
            }
            None => Index::Sparse(enc.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect()),
        };
        MonoTable { r, kappa, exps, degs, start, enc, index }
    }

    /// Shared table for (r, κ).
    pub fn get(r: usize, kappa: u32) -> Arc<MonoTable> {
        thread_local! {
            static CACHE: RefCell<HashMap<(usize, u32), Arc<MonoTable>>> = RefCell::new(HashMap::new());
        }
        CACHE.with(|c| c.borrow_mut().entry((r, kappa)).or_insert_with(|| Arc::new(MonoTable::build(r, kappa))).clone())
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    #[inline]
    fn lookup(&self, code: usize) -> usize {
        match &self.index {
            Index::Dense(v) => v[code] as usize,
            Index::Sparse(h) => h[&code] as usize,
        }
    }

    fn index_of(&self, e: &[u32]) -> Option<usize> {
        let t: u32 = e.iter().sum();
        if t > self.kappa {
            return None;
        }
        let base = self.kappa as usize + 1;
        let code = e.iter().rev().fold(0usize, |acc, &k| acc * base + k as usize);
        Some(self.lookup(code))
    }
}

fn compositions(t: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let r = cur.len();
    if r == 0 {
        if t == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == r - 1 {
        cur[i] = t;
        out.push(cur.clone());
        return;
    }
    for k in (0..=t).rev() {
        cur[i] = k;
        compositions(t - k, i + 1, cur, out);
    }
    cur[i] = 0;
}

/// Truncated series: coefficient of every monomial of total degree ≤ κ.
#[derive(Clone)]
pub struct Series<F> {
    table: Arc<MonoTable>,
    c: Vec<F>,
}

impl<F: Ring> PartialEq for Series<F> {
    fn eq(&self, o: &Self) -> bool {
        self.table.r == o.table.r && self.table.kappa == o.table.kappa && self.c == o.c
    }
}

impl<F: Ring> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("{x:?}*{:?}", self.table.exps[i]))
            .collect();
        write!(f, "Series[κ={}]({})", self.table.kappa, parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl<F: Ring> Series<F> {
    pub fn zero(r: usize, kappa: u32, like: &F) -> Self {
        let table = MonoTable::get(r, kappa);
        let c = vec![like.zero_like(); table.len()];
        Series { table, c }
    }

    pub fn constant(a: F, r: usize, kappa: u32) -> Self {
        let mut s = Self::zero(r, kappa, &a);
        s.c[0] = a;
        s
    }

    /// The variable with index i.
    pub fn var(i: usize, r: usize, kappa: u32, like: &F) -> Self {
        let mut s = Self::zero(r, kappa, like);
        if kappa >= 1 {
            let mut e = vec![0; r];
            e[i] = 1;
            let k = s.table.index_of(&e).unwrap();
            s.c[k] = like.one_like();
        }
        s
    }

    pub fn from_mpoly(m: &MPoly<F>, kappa: u32) -> Self {
        let mut s = Self::zero(m.nvars(), kappa, m.coeff_zero());
        for (e, c) in m.terms() {
            if let Some(k) = s.table.index_of(e) {
                s.c[k] = c.clone();
            }
        }
        s
    }

    pub fn to_mpoly(&self) -> MPoly<F> {
        let like = self.c[0].zero_like();
        MPoly::from_terms(self.table.r, self.table.exps.iter().cloned().zip(self.c.iter().cloned()), &like)
    }

    pub fn nvars(&self) -> usize {
        self.table.r
    }

    pub fn kappa(&self) -> u32 {
        self.table.kappa
    }

    pub fn coeff(&self, e: &[u32]) -> F {
        match self.table.index_of(e) {
            Some(k) => self.c[k].clone(),
            None => self.c[0].zero_like(),
        }
    }

    pub fn constant_term(&self) -> &F {
        &self.c[0]
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.table.exps.iter().zip(self.c.iter())
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Series<G> {
        Series { table: self.table.clone(), c: self.c.iter().map(f).collect() }
    }

    /// Re-truncate (or zero-extend) to a new bound.
    pub fn with_kappa(&self, kappa: u32) -> Self {
        if kappa == self.table.kappa {
            return self.clone();
        }
        let table = MonoTable::get(self.table.r, kappa);
        let mut c: Vec<F> = self.c.iter().take(table.len()).cloned().collect();
        c.resize(table.len(), self.c[0].zero_like());
        Series { table, c }
    }

    fn coerce(&self, o: &Self) -> (Self, Self) {
        let k = self.table.kappa.min(o.table.kappa);
        (self.with_kappa(k), o.with_kappa(k))
    }

    fn mul_same(&self, o: &Self) -> Self {
        let t = &self.table;
        let is_const = |s: &Self| s.c[1..].iter().all(Ring::is_zero);
        if is_const(o) {
            return Series { table: t.clone(), c: self.c.iter().map(|a| a.mul(&o.c[0])).collect() };
        }
        if is_const(self) {
            return Series { table: t.clone(), c: o.c.iter().map(|b| self.c[0].mul(b)).collect() };
        }
        let mut out = vec![self.c[0].zero_like(); t.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let room = t.kappa - t.degs[i];
            let ei = t.enc[i];
            for j in 0..t.start[room as usize + 1] {
                let b = &o.c[j];
                if b.is_zero() {
                    continue;
                }
                let k = t.lookup(ei + t.enc[j]);
                out[k].add_mul_assign(a, b);
            }
        }
        Series { table: t.clone(), c: out }
    }

    /// Newton iteration b ← b + b(1 − a·b) with doubling precision.
    pub fn invert(&self) -> Result<Self> {
        let b0 = self.c[0].inv().ok_or(Error::SeriesNotInvertible)?;
        let r = self.table.r;
        let kappa = self.table.kappa;
        let mut b = Series::constant(b0, r, 0);
        let mut cur = 0u32;
        while cur < kappa {
            let next = (2 * cur + 1).min(kappa);
            let bn = b.with_kappa(next);
            let an = self.with_kappa(next);
            let e = bn.one_like().sub(&an.mul_same(&bn));
            b = bn.add(&bn.mul_same(&e));
            cur = next;
        }
        Ok(b)
    }

    /// Evaluate the truncated series as a polynomial.
    pub fn eval_poly(&self, point: &[F]) -> F {
        self.to_mpoly().eval(point)
    }
}

impl<F: Ring> Ring for Series<F> {
    fn zero_like(&self) -> Self {
        Series { table: self.table.clone(), c: vec![self.c[0].zero_like(); self.c.len()] }
    }
    fn one_like(&self) -> Self {
        let mut s = self.zero_like();
        s.c[0] = self.c[0].one_like();
        s
    }
    fn from_int(&self, n: i64) -> Self {
        let mut s = self.zero_like();
        s.c[0] = self.c[0].from_int(n);
        s
    }
    fn from_base(&self, a: crate::field::Fp) -> Self {
        let mut s = self.zero_like();
        s.c[0] = self.c[0].from_base(a);
        s
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b) = self.coerce(o);
        Series { table: a.table.clone(), c: a.c.iter().zip(&b.c).map(|(x, y)| x.add(y)).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b) = self.coerce(o);
        Series { table: a.table.clone(), c: a.c.iter().zip(&b.c).map(|(x, y)| x.sub(y)).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        if Arc::ptr_eq(&self.table, &o.table) {
            return self.mul_same(o);
        }
        let (a, b) = self.coerce(o);
        a.mul_same(&b)
    }
    fn neg(&self) -> Self {
        Series { table: self.table.clone(), c: self.c.iter().map(|x| x.neg()).collect() }
    }
    fn inv(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn characteristic(&self) -> u64 {
        self.c[0].characteristic()
    }
}

/// Checked ring operation: both operands must share r and κ.
pub fn series_arith<F: Ring>(a: &Series<F>, b: &Series<F>, op: SeriesOp) -> Result<Series<F>> {
    if a.nvars() != b.nvars() || a.kappa() != b.kappa() {
        return Err(Error::ShapeMismatch(format!(
            "(r={}, κ={}) vs (r={}, κ={})",
            a.nvars(),
            a.kappa(),
            b.nvars(),
            b.kappa()
        )));
    }
    Ok(match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
    })
}

pub fn series_invert<F: Ring>(a: &Series<F>) -> Result<Series<F>> {
    a.invert()
}
