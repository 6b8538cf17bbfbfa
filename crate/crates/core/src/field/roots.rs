//! Root finding over finite fields by distinct-degree and equal-degree splitting.

use std::sync::Arc;

use super::ext::{FieldContext, FieldElement};
use super::fp::{FiniteField, Fp};
use crate::error::{Error, Result};
use crate::poly::{poly_gcd, squarefree_part, UPoly};
use crate::ring::Ring;

/// `x^(p^k) mod f`, computed by k successive p-th powers.
fn frobenius_power<F: FiniteField>(f: &UPoly<F>, k: usize) -> UPoly<F> {
    let zero = f.zero_coeff().clone();
    let p = zero.characteristic() as u128;
    let mut h = UPoly::var(&zero).rem_monic(f);
    for _ in 0..k {
        h = h.pow_mod(p, f);
    }
    h
}

/// Ben-Or irreducibility test for a monic polynomial over 𝔽_p.
pub fn is_irreducible(f: &UPoly<Fp>) -> bool {
    let e = f.degree();
    if e < 1 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let zero = *f.zero_coeff();
    let x = UPoly::var(&zero);
    let p = zero.characteristic() as u128;
    let mut h = x.clone();
    for _ in 1..=(e as usize) / 2 {
        h = h.pow_mod(p, f);
        let g = poly_gcd(&h.sub(&x), f).expect("nonzero");
        if g.degree() > 0 {
            return false;
        }
    }
    true
}

/// Split a squarefree monic polynomial over 𝔽_p into products of irreducibles of equal degree.
pub fn distinct_degree(s: &UPoly<Fp>) -> Vec<(usize, UPoly<Fp>)> {
    let zero = *s.zero_coeff();
    let x = UPoly::var(&zero);
    let p = zero.characteristic() as u128;
    let mut f = s.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1usize;
    while f.degree() >= 2 * i as isize {
        h = h.pow_mod(p, &f);
        let g = poly_gcd(&h.sub(&x), &f).expect("nonzero");
        if g.degree() > 0 {
            f = f.div_exact_poly(&g).expect("factor divides");
            h = h.rem_monic(&f);
            out.push((i, g));
        }
        i += 1;
    }
    if f.degree() > 0 {
        out.push((f.degree() as usize, f));
    }
    out
}

/// Roots of a monic product of distinct linear factors over F.
pub fn split_linear<F: FiniteField, G: rand::Rng + ?Sized>(g: &UPoly<F>, rng: &mut G) -> Vec<F> {
    let mut out = Vec::new();
    split_rec(g, rng, &mut out);
    out
}

fn split_rec<F: FiniteField, G: rand::Rng + ?Sized>(g: &UPoly<F>, rng: &mut G, out: &mut Vec<F>) {
    let d = g.degree();
    if d <= 0 {
        return;
    }
    if d == 1 {
        out.push(g.coeff(0).neg());
        return;
    }
    let zero = g.zero_coeff().clone();
    let p = zero.characteristic();
    let k = zero.ext_degree();
    loop {
        let a = UPoly::new((0..d).map(|_| zero.random_like(rng)).collect(), zero.clone());
        if a.degree() <= 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map onto 𝔽_2
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                t = t.pow_mod(2, g);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((q−1)/2) = (∏_j a^(p^j))^((p−1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..k {
                t = t.pow_mod(p as u128, g);
                norm = norm.mul(&t).rem_monic(g);
            }
            norm.pow_mod(((p - 1) / 2) as u128, g).sub(&UPoly::constant(zero.one_like()))
        };
        if b.is_zero() {
            continue;
        }
        let h = poly_gcd(&b, g).expect("nonzero");
        if h.degree() > 0 && h.degree() < d {
            let rest = g.div_exact_poly(&h).expect("factor divides");
            split_rec(&h, rng, out);
            split_rec(&rest, rng, out);
            return;
        }
    }
}

/// Distinct roots of q lying in its own coefficient field.
pub fn roots_in_field<F: FiniteField, G: rand::Rng + ?Sized>(q: &UPoly<F>, rng: &mut G) -> Result<Vec<F>> {
    if q.is_zero() {
        return Err(Error::ZeroInput("roots"));
    }
    let q = q.monic()?;
    if q.degree() == 0 {
        return Ok(Vec::new());
    }
    let k = q.zero_coeff().ext_degree();
    let x = UPoly::var(q.zero_coeff());
    let h = frobenius_power(&q, k);
    let g = poly_gcd(&h.sub(&x), &q)?;
    let mut r = split_linear(&g, rng);
    r.sort_by_key(|a| a.coords());
    Ok(r)
}

/// All roots of q, with multiplicity, in its splitting field over 𝔽_p.
///
/// Returns the extension context together with the roots sorted
/// lexicographically by coefficient vector.
pub fn find_roots<G: rand::Rng + ?Sized>(q: &UPoly<Fp>, rng: &mut G) -> Result<(Arc<FieldContext>, Vec<FieldElement>)> {
    if q.is_zero() {
        return Err(Error::ZeroInput("roots"));
    }
    let p = q.zero_coeff().characteristic();
    let q = q.monic()?;
    if q.degree() == 0 {
        return Ok((FieldContext::prime(p)?, Vec::new()));
    }
    let (s, _) = squarefree_part(&q)?;
    let groups = distinct_degree(&s);
    let k = groups.iter().fold(1usize, |acc, (d, _)| lcm(acc, *d));
    let ctx = FieldContext::random(p, k, rng)?;
    let z = ctx.zero();
    let mut distinct = Vec::new();
    for (d, g) in &groups {
        if *d == 1 {
            distinct.extend(split_linear(g, rng).into_iter().map(|r| ctx.from_base(r)));
        } else {
            let gk = g.map(&z, |c| ctx.from_base(*c));
            distinct.extend(split_linear(&gk, rng));
        }
    }
    let mut qk = q.map(&z, |c| ctx.from_base(*c));
    let mut all = Vec::new();
    for r in distinct {
        let lin = UPoly::new(vec![r.neg(), z.one_like()], z.clone());
        while qk.eval(&r).is_zero() {
            qk = qk.div_exact_poly(&lin)?;
            all.push(r.clone());
        }
    }
    all.sort_by_key(|a| a.coords());
    Ok((ctx, all))
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd_usize(a, b) * b
}
