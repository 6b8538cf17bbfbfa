//! Dense univariate polynomials over an arbitrary coefficient ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{berkowitz_charpoly, Matrix};
use crate::ring::Ring;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone)]
pub struct UPoly<R> {
    c: Vec<R>,
    zero: R,
}

impl<R: Ring> PartialEq for UPoly<R> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<R: Ring> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.c)
    }
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut c: Vec<R>, zero: R) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c, zero }
    }

    pub fn zero(like: &R) -> Self {
        UPoly { c: Vec::new(), zero: like.zero_like() }
    }

    pub fn constant(a: R) -> Self {
        let z = a.zero_like();
        Self::new(vec![a], z)
    }

    /// `a·T^k`.
    pub fn monomial(a: R, k: usize) -> Self {
        let z = a.zero_like();
        let mut c = vec![z.clone(); k];
        c.push(a);
        Self::new(c, z)
    }

    /// The polynomial `T`.
    pub fn var(like: &R) -> Self {
        Self::monomial(like.one_like(), 1)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn zero_coeff(&self) -> &R {
        &self.zero
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> R {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| x.is_one())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(c, self.zero.clone())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.c.iter().map(|a| a.neg()).collect(), self.zero.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut c = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(c, self.zero.clone())
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::new(self.c.iter().map(|a| a.mul(s)).collect(), self.zero.clone())
    }

    /// Coefficient-wise exact division by a ring element.
    pub fn div_exact_scalar(&self, s: &R) -> Result<Self> {
        let c = self
            .c
            .iter()
            .map(|a| a.div_exact(s).ok_or(Error::InexactDivision))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(c, self.zero.clone()))
    }

    pub fn map<S: Ring>(&self, zero: &S, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.c.iter().map(f).collect(), zero.zero_like())
    }

    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| a.mul(&a.from_int(i as i64))).collect();
        Self::new(c, self.zero.clone())
    }

    /// Horner evaluation in the coefficient ring.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// Horner evaluation in a ring the coefficients embed into.
    pub fn eval_with<S: Ring>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(&embed(a));
        }
        acc
    }

    /// Division with remainder; the divisor's leading coefficient must be a unit.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let li = b.lead().inv().ok_or(Error::NonInvertibleLeading)?;
        let db = b.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= db {
            return Ok((Self::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - db];
        for k in (0..q.len()).rev() {
            let top = r[k + db].clone();
            if top.is_zero() {
                continue;
            }
            let f = top.mul(&li);
            for (j, bj) in b.c.iter().enumerate() {
                r[k + j] = r[k + j].sub(&f.mul(bj));
            }
            q[k] = f;
        }
        r.truncate(db);
        Ok((Self::new(q, self.zero.clone()), Self::new(r, self.zero.clone())))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divrem(b)?.1)
    }

    /// Remainder modulo a monic polynomial; division free.
    pub fn rem_monic(&self, m: &Self) -> Self {
        debug_assert!(m.is_monic());
        let dm = m.c.len() - 1;
        if self.c.len() <= dm {
            return self.clone();
        }
        let mut r = self.c.clone();
        for k in (dm..r.len()).rev() {
            let top = r[k].clone();
            if top.is_zero() {
                continue;
            }
            for j in 0..dm {
                r[k - dm + j] = r[k - dm + j].sub(&top.mul(&m.c[j]));
            }
        }
        r.truncate(dm);
        Self::new(r, self.zero.clone())
    }

    /// Exact quotient by a divisor; fails on a nonzero remainder.
    pub fn div_exact_poly(&self, b: &Self) -> Result<Self> {
        let (q, r) = if b.is_monic() { self.divrem_monic(b) } else { self.divrem(b)? };
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }

    /// Quotient and remainder by a monic divisor; division free.
    pub fn divrem_monic(&self, m: &Self) -> (Self, Self) {
        let dm = m.c.len() - 1;
        if self.c.len() <= dm {
            return (Self::zero(&self.zero), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![self.zero.clone(); r.len() - dm];
        for k in (0..q.len()).rev() {
            let top = r[k + dm].clone();
            if top.is_zero() {
                continue;
            }
            for j in 0..dm {
                r[k + j] = r[k + j].sub(&top.mul(&m.c[j]));
            }
            q[k] = top;
        }
        r.truncate(dm);
        (Self::new(q, self.zero.clone()), Self::new(r, self.zero.clone()))
    }

    /// Pseudo-remainder: lc(b)^(deg a − deg b + 1)·a mod b.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.c.len() - 1;
        if self.c.len() <= db {
            return self.clone();
        }
        let lb = b.lead();
        let mut r = self.c.clone();
        let steps = r.len() - db;
        for k in (0..steps).rev() {
            let top = r[k + db].clone();
            for x in r.iter_mut() {
                *x = x.mul(&lb);
            }
            for j in 0..db {
                r[k + j] = r[k + j].sub(&top.mul(&b.c[j]));
            }
            r[k + db] = self.zero.clone();
        }
        r.truncate(db);
        Self::new(r, self.zero.clone())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("monic associate"));
        }
        if self.is_monic() {
            return Ok(self.clone());
        }
        let l = self.lead();
        if let Some(li) = l.inv() {
            return Ok(self.scale(&li));
        }
        self.div_exact_scalar(&l)
    }

    /// `self^e mod m` for monic m.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Self::constant(self.zero.one_like()).rem_monic(m);
        let mut b = self.rem_monic(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem_monic(m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem_monic(m);
            }
        }
        acc
    }

    /// Matrix of multiplication by `self` on R[T]/(m) in the basis 1, T, …, T^(δ−1).
    pub fn mul_matrix(&self, m: &Self) -> Matrix<R> {
        let d = m.c.len() - 1;
        let mut mat = Matrix::zeros(d, d, &self.zero);
        let mut col = self.rem_monic(m);
        for k in 0..d {
            for i in 0..d {
                mat.set(i, k, col.coeff(i));
            }
            if k + 1 < d {
                col = col.shift(1).rem_monic(m);
            }
        }
        mat
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.zero.clone(); k];
        c.extend(self.c.iter().cloned());
        Self::new(c, self.zero.clone())
    }

    /// Reassemble a residue from its coordinate vector.
    pub fn from_coords(v: &[R], zero: &R) -> Self {
        Self::new(v.to_vec(), zero.zero_like())
    }
}

/// Monic greatest common divisor.
///
/// Over a field this is the monic Euclidean algorithm. Over other domains
/// the subresultant sequence is used and the final associate is made monic
/// by exact division, which succeeds whenever the monic gcd has coefficients
/// in the ring (always the case for monic inputs over integrally closed rings).
pub fn poly_gcd<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> Result<UPoly<R>> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput("gcd"));
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_zero() {
        return b.monic();
    }
    if a.zero.is_field() {
        let (mut x, mut y) = (a.monic()?, b.monic()?);
        while !y.is_zero() {
            let r = x.rem(&y)?;
            x = y;
            y = if r.is_zero() { r } else { r.monic()? };
        }
        return Ok(x);
    }
    subresultant_gcd(a, b)?.monic()
}

fn subresultant_gcd<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> Result<UPoly<R>> {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let one = a.zero.one_like();
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = (a.degree() - b.degree()) as u64;
        let r = a.prem(&b);
        if r.is_zero() {
            return Ok(b);
        }
        if r.degree() == 0 {
            return Ok(UPoly::constant(one));
        }
        a = b;
        b = r.div_exact_scalar(&g.mul(&h.pow(delta)))?;
        g = a.lead();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).ok_or(Error::InexactDivision)?
        };
    }
}

/// Extended Euclid over a field: `(g, s, t)` with `s·a + t·b = g` and g monic.
pub fn poly_xgcd<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> Result<(UPoly<R>, UPoly<R>, UPoly<R>)> {
    if !a.zero.is_field() {
        return Err(Error::Invalid("extended gcd needs field coefficients".into()));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput("gcd"));
    }
    let zero = UPoly::zero(&a.zero);
    let one = UPoly::constant(a.zero.one_like());
    let (mut r0, mut s0, mut t0) = (a.clone(), one.clone(), zero.clone());
    let (mut r1, mut s1, mut t1) = (b.clone(), zero, one);
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        (r0, s0, t0) = (r1, s1, t1);
        (r1, s1, t1) = (r, s, t);
    }
    let li = r0.lead().inv().ok_or(Error::NonInvertibleLeading)?;
    Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
}

/// Simultaneous monic gcd; zero entries are ignored.
pub fn poly_gcd_many<R: Ring>(ps: &[UPoly<R>]) -> Result<UPoly<R>> {
    let mut it = ps.iter().filter(|p| !p.is_zero());
    let mut g = it.next().ok_or(Error::ZeroInput("gcd"))?.monic()?;
    for p in it {
        if g.degree() == 0 {
            break;
        }
        g = poly_gcd(&g, p)?;
    }
    Ok(g)
}

/// Separable part with the same roots.
///
/// Returns `(part, θ)` where `part` is monic and `θ` is the leading
/// coefficient of the input, so that `P / gcd(P, P') = θ·part` whenever no
/// p-th roots are needed. In characteristic p, factors whose multiplicity
/// is divisible by p are recovered through p-th roots of coefficients.
pub fn squarefree_part<R: Ring>(p: &UPoly<R>) -> Result<(UPoly<R>, R)> {
    if p.is_zero() {
        return Err(Error::ZeroInput("squarefree part"));
    }
    let theta = p.lead();
    Ok((radical(&p.monic()?)?, theta))
}

fn radical<R: Ring>(p: &UPoly<R>) -> Result<UPoly<R>> {
    if p.degree() <= 0 {
        return Ok(UPoly::constant(p.zero.one_like()));
    }
    let dp = p.derivative();
    if dp.is_zero() {
        return radical(&pth_root_poly(p)?);
    }
    let g = poly_gcd(p, &dp)?;
    let w = p.div_exact_poly(&g)?;
    let mut z = g;
    loop {
        let t = poly_gcd(&z, &w)?;
        if t.degree() <= 0 {
            break;
        }
        z = z.div_exact_poly(&t)?;
    }
    if z.degree() <= 0 {
        return Ok(w);
    }
    Ok(w.mul(&radical(&pth_root_poly(&z)?)?))
}

fn pth_root_poly<R: Ring>(p: &UPoly<R>) -> Result<UPoly<R>> {
    let ch = p.zero.characteristic() as usize;
    if ch == 0 {
        return Err(Error::Invalid("zero derivative in characteristic 0".into()));
    }
    let mut c = Vec::new();
    for (i, a) in p.c.iter().enumerate() {
        if i % ch == 0 {
            c.push(a.pth_root().ok_or(Error::Invalid("p-th root unavailable".into()))?);
        } else if !a.is_zero() {
            return Err(Error::Invalid("not a p-th power".into()));
        }
    }
    Ok(UPoly::new(c, p.zero.clone()))
}

/// Resultant of a monic `q` with `g`: the determinant of multiplication by g modulo q.
pub fn resultant_monic<R: Ring>(q: &UPoly<R>, g: &UPoly<R>) -> Result<R> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    if q.degree() == 0 {
        return Ok(q.zero.one_like());
    }
    Ok(g.mul_matrix(q).det())
}

/// Discriminant of a monic polynomial, `(−1)^(δ(δ−1)/2)·Res(q, q')`.
///
/// Equals `b² − 4c` on `T² + bT + c`; vanishes exactly when q has a repeated root.
pub fn discriminant<R: Ring>(q: &UPoly<R>) -> Result<R> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = q.degree() as u64;
    let res = resultant_monic(q, &q.derivative())?;
    Ok(if (d * d.saturating_sub(1) / 2) % 2 == 1 { res.neg() } else { res })
}

/// Sylvester resultant of two polynomials over any commutative ring.
pub fn resultant<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> R {
    let (m, n) = (a.degree().max(0) as usize, b.degree().max(0) as usize);
    let size = m + n;
    if size == 0 {
        return a.zero.one_like();
    }
    let mut s = Matrix::zeros(size, size, &a.zero);
    for i in 0..n {
        for j in 0..=m {
            s.set(i, i + j, a.coeff(m - j));
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s.set(n + i, i + j, b.coeff(n - j));
        }
    }
    s.det()
}

/// Solve Σ_m c_m·node_l^m = rhs_l by Newton divided differences.
pub fn vandermonde_solve<R: Ring>(nodes: &[R], rhs: &[R]) -> Result<Vec<R>> {
    let n = nodes.len();
    if rhs.len() != n {
        return Err(Error::Invalid("node and value counts differ".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = rhs.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = nodes[i].sub(&nodes[i - j]).inv().ok_or(Error::RepeatedNode(i))?;
            c[i] = c[i].sub(&c[i - 1]).mul(&den);
        }
    }
    let zero = nodes[0].zero_like();
    let mut acc = UPoly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UPoly::new(vec![nodes[i].neg(), zero.one_like()], zero.clone());
        acc = acc.mul(&lin).add(&UPoly::constant(c[i].clone()));
    }
    let mut out = acc.into_coeffs();
    out.resize(n, zero);
    Ok(out)
}

/// Berkowitz characteristic polynomial of the multiplication map by `g` modulo `q`.
pub fn charpoly_mod<R: Ring>(g: &UPoly<R>, q: &UPoly<R>) -> Result<UPoly<R>> {
    berkowitz_charpoly(&g.mul_matrix(q))
}
