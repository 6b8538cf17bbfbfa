//! Multivariate polynomials with an explicit coefficient table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::poly::UPoly;
use crate::ring::Ring;

/// Exponent vectors map to nonzero coefficients; ordered lexicographically.
#[derive(Clone)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
    zero: F,
}

impl<F: Ring> PartialEq for MPoly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl<F: Ring> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c:?}*{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn add_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<F: Ring> MPoly<F> {
    pub fn zero(nvars: usize, like: &F) -> Self {
        MPoly { nvars, terms: BTreeMap::new(), zero: like.zero_like() }
    }

    pub fn constant(c: F, nvars: usize) -> Self {
        let mut m = Self::zero(nvars, &c);
        if !c.is_zero() {
            m.terms.insert(vec![0; nvars], c);
        }
        m
    }

    /// The variable with index `i`.
    pub fn var(i: usize, nvars: usize, like: &F) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, vec![(e, like.one_like())], like)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, F)>, like: &F) -> Self {
        let mut m = Self::zero(nvars, like);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            m.add_term(e, c);
        }
        m
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff_zero(&self) -> &F {
        &self.zero
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&vec![0; self.nvars])
    }

    /// Total degree, -1 for zero.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var] as i64).max().unwrap_or(-1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))), &self.zero)
    }

    pub fn map<G: Ring>(&self, like: &G, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))), like)
    }

    /// Drop terms of total degree above `k`.
    pub fn truncate(&self, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= k);
        Self::from_terms(self.nvars, terms.map(|(e, c)| (e.clone(), c.clone())), &self.zero)
    }

    /// Homogeneous component of total degree `k`.
    pub fn component(&self, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == k);
        Self::from_terms(self.nvars, terms.map(|(e, c)| (e.clone(), c.clone())), &self.zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[var] -= 1;
            (e2, c.mul(&c.from_int(e[var] as i64)))
        });
        Self::from_terms(self.nvars, terms, &self.zero)
    }

    /// Evaluate in any ring the coefficients map into.
    pub fn eval_with<R: Ring>(&self, args: &[R], like: &R, embed: impl Fn(&F) -> R) -> R {
        assert_eq!(args.len(), self.nvars);
        let mut powers: Vec<Vec<R>> = args.iter().map(|a| vec![a.one_like(), a.clone()]).collect();
        let mut acc = like.zero_like();
        for (e, c) in &self.terms {
            let mut t = embed(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let nx = powers[i].last().unwrap().mul(&args[i]);
                    powers[i].push(nx);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluate at a point with coefficients in the same ring.
    pub fn eval(&self, point: &[F]) -> F {
        self.eval_with(point, &self.zero, |c| c.clone())
    }

    /// Substitute polynomials for the variables.
    pub fn substitute(&self, images: &[MPoly<F>]) -> MPoly<F> {
        let nv = images.first().map_or(0, |m| m.nvars);
        let like = MPoly::zero(nv, &self.zero);
        self.eval_with(images, &like, |c| MPoly::constant(c.clone(), nv))
    }

    /// Re-embed into a ring with more variables; variable i goes to `slots[i]`.
    pub fn embed_vars(&self, nvars: usize, slots: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[slots[i]] += k;
            }
            (e2, c.clone())
        });
        Self::from_terms(nvars, terms, &self.zero)
    }

    /// View as a polynomial in the last variable over the remaining ones.
    pub fn to_univariate_last(&self) -> UPoly<MPoly<F>> {
        let nv = self.nvars - 1;
        let zero = MPoly::zero(nv, &self.zero);
        let deg = self.degree_in(nv).max(-1);
        let mut cs = vec![zero.clone(); (deg + 1) as usize];
        for (e, c) in &self.terms {
            cs[e[nv] as usize].add_term(e[..nv].to_vec(), c.clone());
        }
        UPoly::new(cs, zero)
    }

    /// Inverse of [`MPoly::to_univariate_last`].
    pub fn from_univariate_last(u: &UPoly<MPoly<F>>) -> Self {
        let z = u.zero_coeff();
        let nv = z.nvars + 1;
        let mut m = MPoly::zero(nv, &z.zero);
        for (k, c) in u.coeffs().iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = e.clone();
                e2.push(k as u32);
                m.add_term(e2, x.clone());
            }
        }
        m
    }

    fn lead_term(&self) -> Option<(&Vec<u32>, &F)> {
        self.terms.iter().next_back()
    }
}

impl<F: Ring> Ring for MPoly<F> {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.nvars, &self.zero)
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.zero.one_like(), self.nvars)
    }
    fn from_int(&self, n: i64) -> Self {
        MPoly::constant(self.zero.from_int(n), self.nvars)
    }
    fn from_base(&self, c: crate::field::Fp) -> Self {
        MPoly::constant(self.zero.from_base(c), self.nvars)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for (e, c) in &o.terms {
            m.add_term(e.clone(), c.clone());
        }
        m
    }
    fn sub(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for (e, c) in &o.terms {
            m.add_term(e.clone(), c.neg());
        }
        m
    }
    fn mul(&self, o: &Self) -> Self {
        if self.terms.is_empty() || o.terms.is_empty() {
            return self.zero_like();
        }
        if o.terms.len() == 1 && o.is_constant() {
            return self.scale(o.terms.values().next().unwrap());
        }
        if self.terms.len() == 1 && self.is_constant() {
            return o.scale(self.terms.values().next().unwrap());
        }
        let mut acc: HashMap<Vec<u32>, F> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = add_exp(ea, eb);
                let t = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(x) => *x = x.add(&t),
                    None => {
                        acc.insert(e, t);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { nvars: self.nvars, terms, zero: self.zero.clone() }
    }
    fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            zero: self.zero.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.terms.len() == 1 && self.is_constant() {
            let c = self.terms.values().next().unwrap().inv()?;
            return Some(MPoly::constant(c, self.nvars));
        }
        None
    }
    /// Multivariate division by lexicographic leading terms; exact or nothing.
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        if let Some(i) = o.inv() {
            return Some(self.mul(&i));
        }
        let (le, lc) = o.lead_term()?;
        let lci = lc.inv();
        let mut rem = self.clone();
        let mut quo = self.zero_like();
        while let Some((re, rc)) = rem.lead_term() {
            if re.iter().zip(le).any(|(a, b)| a < b) {
                return None;
            }
            let c = match &lci {
                Some(li) => rc.mul(li),
                None => rc.div_exact(lc)?,
            };
            let e: Vec<u32> = re.iter().zip(le).map(|(a, b)| a - b).collect();
            let t = MPoly::from_terms(self.nvars, vec![(e, c)], &self.zero);
            rem = rem.sub(&t.mul(o));
            quo = quo.add(&t);
        }
        Some(quo)
    }
    fn characteristic(&self) -> u64 {
        self.zero.characteristic()
    }
    fn is_field(&self) -> bool {
        self.nvars == 0 && self.zero.is_field()
    }
    fn pth_root(&self) -> Option<Self> {
        let p = self.characteristic() as u32;
        if p == 0 {
            return None;
        }
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().any(|k| k % p != 0) {
                return None;
            }
            terms.push((e.iter().map(|k| k / p).collect(), c.pth_root()?));
        }
        Some(MPoly::from_terms(self.nvars, terms, &self.zero))
    }
}
