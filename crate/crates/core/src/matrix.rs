//! Dense matrices over a commutative ring and division-free linear algebra.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
    zero: R,
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = self.data.chunks(self.cols.max(1)).collect();
        write!(f, "Matrix{rows:?}")
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, like: &R) -> Self {
        let zero = like.zero_like();
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, like: &R) -> Self {
        let mut m = Self::zeros(n, n, like);
        for i in 0..n {
            m.set(i, i, like.one_like());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>, like: &R) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), zero: like.zero_like() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<S: Ring>(&self, like: &S, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero: like.zero_like() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, zero: self.zero.clone() }
    }

    pub fn scale(&self, s: &R) -> Self {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, zero: self.zero.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Determinant via the characteristic polynomial; division free.
    pub fn det(&self) -> R {
        let cp = berkowitz_charpoly(self).expect("det of non-square matrix");
        let c0 = cp.coeff(0);
        if self.rows % 2 == 1 {
            c0.neg()
        } else {
            c0
        }
    }

    /// Inverse by Gauss–Jordan elimination; pivots must be units.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, &self.zero);
        for col in 0..n {
            let (piv, pinv) = (col..n).find_map(|r| a.get(r, col).inv().map(|i| (r, i)))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].mul(&pinv);
                inv.data[col * n + j] = inv.data[col * n + j].mul(&pinv);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(col, j).mul(&f);
                    a.data[r * n + j] = a.data[r * n + j].sub(&x);
                    let y = inv.get(col, j).mul(&f);
                    inv.data[r * n + j] = inv.data[r * n + j].sub(&y);
                }
            }
        }
        Some(inv)
    }

    /// Solve A·x = b by elimination with unit pivots.
    pub fn solve(&self, b: &[R]) -> Option<Vec<R>> {
        let inv = self.inverse()?;
        Some(inv.mul_vec(b))
    }

    /// `(det A, adj(A)·w)` from Cayley–Hamilton; division free.
    pub fn adjugate_apply(&self, w: &[R]) -> Result<(R, Vec<R>)> {
        let cp = berkowitz_charpoly(self)?;
        let n = self.rows;
        let c = cp.coeffs();
        // adj(A) = (−1)^(n+1)·Σ_{k=1..n} c_k A^(k−1), evaluated by Horner on w
        let mut acc: Vec<R> = w.iter().map(|x| x.mul(&c[n])).collect();
        for k in (1..n).rev() {
            acc = self.mul_vec(&acc);
            for (a, x) in acc.iter_mut().zip(w) {
                *a = a.add(&x.mul(&c[k]));
            }
        }
        let det = if n % 2 == 1 { c[0].neg() } else { c[0].clone() };
        if n.is_multiple_of(2) {
            acc = acc.iter().map(|a| a.neg()).collect();
        }
        Ok((det, acc))
    }
}

/// Monic characteristic polynomial det(T·I − A) by Berkowitz's algorithm.
///
/// Uses only ring additions and multiplications.
pub fn berkowitz_charpoly<R: Ring>(a: &Matrix<R>) -> Result<UPoly<R>> {
    if a.rows != a.cols {
        return Err(Error::NotSquare(a.rows, a.cols));
    }
    let n = a.rows;
    let one = a.zero.one_like();
    let mut v = vec![one.clone()];
    for r in 0..n {
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(a.get(r, r).neg());
        let mut s: Vec<R> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for k in 0..r {
            let mut dot = a.zero.clone();
            for (j, sj) in s.iter().enumerate() {
                let rj = a.get(r, j);
                if !rj.is_zero() && !sj.is_zero() {
                    dot = dot.add(&rj.mul(sj));
                }
            }
            t.push(dot.neg());
            if k + 1 < r {
                s = (0..r)
                    .map(|i| {
                        let mut acc = a.zero.clone();
                        for (j, sj) in s.iter().enumerate() {
                            let aij = a.get(i, j);
                            if !aij.is_zero() && !sj.is_zero() {
                                acc = acc.add(&aij.mul(sj));
                            }
                        }
                        acc
                    })
                    .collect();
            }
        }
        let mut nv = vec![a.zero.clone(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                let tij = &t[i - j];
                if !tij.is_zero() && !vj.is_zero() {
                    *slot = slot.add(&tij.mul(vj));
                }
            }
        }
        v = nv;
    }
    v.reverse();
    Ok(UPoly::new(v, a.zero.clone()))
}
