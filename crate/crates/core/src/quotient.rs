//! Derived rings: residues modulo a monic polynomial, fractions with a fixed
//! denominator, and first-order jets.

use std::sync::Arc;

use crate::poly::UPoly;
use crate::ring::Ring;

/// Residue class in R[T]/(m) with m monic.
#[derive(Clone)]
pub struct QElem<R> {
    p: UPoly<R>,
    m: Arc<UPoly<R>>,
}

impl<R: Ring> PartialEq for QElem<R> {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p
    }
}

impl<R: Ring> std::fmt::Debug for QElem<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QElem({:?})", self.p)
    }
}

impl<R: Ring> QElem<R> {
    pub fn new(p: UPoly<R>, m: Arc<UPoly<R>>) -> Self {
        assert!(m.is_monic(), "quotient modulus must be monic");
        QElem { p: p.rem_monic(&m), m }
    }

    pub fn constant(c: R, m: &Arc<UPoly<R>>) -> Self {
        Self::new(UPoly::constant(c), m.clone())
    }

    /// The class of T.
    pub fn generator(m: &Arc<UPoly<R>>) -> Self {
        Self::new(UPoly::var(m.zero_coeff()), m.clone())
    }

    pub fn poly(&self) -> &UPoly<R> {
        &self.p
    }

    pub fn modulus(&self) -> &Arc<UPoly<R>> {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.degree() as usize
    }

    /// Coordinates on the basis 1, T, …, T^(δ−1).
    pub fn coords(&self) -> Vec<R> {
        (0..self.rank()).map(|i| self.p.coeff(i)).collect()
    }

    pub fn from_coords(v: &[R], m: &Arc<UPoly<R>>) -> Self {
        Self::new(UPoly::from_coords(v, m.zero_coeff()), m.clone())
    }

    fn with(&self, p: UPoly<R>) -> Self {
        QElem { p, m: self.m.clone() }
    }
}

impl<R: Ring> Ring for QElem<R> {
    fn zero_like(&self) -> Self {
        self.with(UPoly::zero(self.m.zero_coeff()))
    }
    fn one_like(&self) -> Self {
        Self::new(UPoly::constant(self.m.zero_coeff().one_like()), self.m.clone())
    }
    fn from_int(&self, n: i64) -> Self {
        Self::new(UPoly::constant(self.m.zero_coeff().from_int(n)), self.m.clone())
    }
    fn from_base(&self, c: crate::field::Fp) -> Self {
        Self::new(UPoly::constant(self.m.zero_coeff().from_base(c)), self.m.clone())
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.with(self.p.add(&o.p))
    }
    fn sub(&self, o: &Self) -> Self {
        self.with(self.p.sub(&o.p))
    }
    fn mul(&self, o: &Self) -> Self {
        self.with(self.p.mul(&o.p).rem_monic(&self.m))
    }
    fn neg(&self) -> Self {
        self.with(self.p.neg())
    }
    /// Inverse through the adjugate of the multiplication matrix.
    fn inv(&self) -> Option<Self> {
        let rank = self.rank();
        if rank == 0 {
            return None;
        }
        let z = self.m.zero_coeff();
        let mut e0 = vec![z.zero_like(); rank];
        e0[0] = z.one_like();
        let (det, adj) = self.p.mul_matrix(&self.m).adjugate_apply(&e0).ok()?;
        let di = det.inv()?;
        let v: Vec<R> = adj.iter().map(|a| a.mul(&di)).collect();
        Some(Self::from_coords(&v, &self.m))
    }
    fn characteristic(&self) -> u64 {
        self.m.zero_coeff().characteristic()
    }
}

/// Fraction `num / den^e` with a denominator fixed for the whole computation.
#[derive(Clone, Debug)]
pub struct Frac<R> {
    num: R,
    e: u32,
    den: Arc<R>,
}

impl<R: Ring> Frac<R> {
    pub fn new(num: R, e: u32, den: &Arc<R>) -> Self {
        Frac { num, e, den: den.clone() }
    }

    pub fn numerator(&self) -> &R {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// Numerator over `den^e` for a chosen `e ≥ self.e`.
    pub fn numerator_at(&self, e: u32) -> R {
        assert!(e >= self.e);
        self.num.mul(&self.den.pow((e - self.e) as u64))
    }

    fn align(&self, o: &Self) -> (R, R, u32) {
        let e = self.e.max(o.e);
        (self.numerator_at(e), o.numerator_at(e), e)
    }
}

impl<R: Ring> PartialEq for Frac<R> {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, _) = self.align(o);
        a == b
    }
}

impl<R: Ring> Ring for Frac<R> {
    fn zero_like(&self) -> Self {
        Frac { num: self.num.zero_like(), e: 0, den: self.den.clone() }
    }
    fn one_like(&self) -> Self {
        Frac { num: self.num.one_like(), e: 0, den: self.den.clone() }
    }
    fn from_int(&self, n: i64) -> Self {
        Frac { num: self.num.from_int(n), e: 0, den: self.den.clone() }
    }
    fn from_base(&self, c: crate::field::Fp) -> Self {
        Frac { num: self.num.from_base(c), e: 0, den: self.den.clone() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b, e) = self.align(o);
        Frac { num: a.add(&b), e, den: self.den.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b, e) = self.align(o);
        Frac { num: a.sub(&b), e, den: self.den.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        Frac { num: self.num.mul(&o.num), e: self.e + o.e, den: self.den.clone() }
    }
    fn neg(&self) -> Self {
        Frac { num: self.num.neg(), e: self.e, den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        let ni = self.num.inv()?;
        Some(Frac { num: ni.mul(&self.den.pow(self.e as u64)), e: 0, den: self.den.clone() })
    }
    fn characteristic(&self) -> u64 {
        self.num.characteristic()
    }
}

/// First-order jet `v + Σ d_i ε_i` with all products ε_i ε_j = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<R> {
    pub v: R,
    pub d: Vec<R>,
}

impl<R: Ring> Jet<R> {
    pub fn constant(v: R, k: usize) -> Self {
        let z = v.zero_like();
        Jet { v, d: vec![z; k] }
    }

    fn map2(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        Jet { v: f(&self.v, &o.v), d: self.d.iter().zip(&o.d).map(|(a, b)| f(a, b)).collect() }
    }
}

impl<R: Ring> Ring for Jet<R> {
    fn zero_like(&self) -> Self {
        Jet::constant(self.v.zero_like(), self.d.len())
    }
    fn one_like(&self) -> Self {
        Jet::constant(self.v.one_like(), self.d.len())
    }
    fn from_int(&self, n: i64) -> Self {
        Jet::constant(self.v.from_int(n), self.d.len())
    }
    fn from_base(&self, c: crate::field::Fp) -> Self {
        Jet::constant(self.v.from_base(c), self.d.len())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self
            .d
            .iter()
            .zip(&o.d)
            .map(|(a, b)| {
                let x = if a.is_zero() { a.clone() } else { a.mul(&o.v) };
                if b.is_zero() {
                    x
                } else {
                    x.add(&self.v.mul(b))
                }
            })
            .collect();
        Jet { v: self.v.mul(&o.v), d }
    }
    fn neg(&self) -> Self {
        Jet { v: self.v.neg(), d: self.d.iter().map(|x| x.neg()).collect() }
    }
    fn inv(&self) -> Option<Self> {
        let vi = self.v.inv()?;
        let vi2 = vi.mul(&vi);
        Some(Jet { v: vi, d: self.d.iter().map(|x| x.mul(&vi2).neg()).collect() })
    }
    fn characteristic(&self) -> u64 {
        self.v.characteristic()
    }
}
