#![allow(dead_code)]

use std::path::{Path, PathBuf};

use geores::circuit::{random_circuit, Builder, Circuit, RandomSpec};
use geores::cli::system::{parse_system, SystemFile};
use geores::field::roots::find_roots;
use geores::resolution::{shift_mpoly, specialize_upoly};
use geores::series::Series;
use geores::{FieldElement, Fp, MPoly, Ring, UPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

/// Every corpus file with its parsed system, in name order.
pub fn corpus() -> Vec<(String, SystemFile)> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sys"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let sys = parse_system(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, sys)
        })
        .collect()
}

/// Corpus files whose name says they are meant for toric mode.
pub fn corpus_mode(name: &str) -> &'static str {
    if name.starts_with("toric") {
        "toric"
    } else {
        "affine"
    }
}

/// Dense polynomial with every monomial of total degree ≤ d drawn at random.
pub fn rand_poly(p: u64, n: usize, d: u32, rng: &mut impl Rng) -> MPoly<Fp> {
    let z = Fp::zero(p);
    let mut terms = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        if e.iter().sum::<u32>() <= d {
            terms.push((e.clone(), Fp::random(p, rng)));
        }
        let mut i = 0;
        while i < n && e[i] == d {
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        e[i] += 1;
    }
    MPoly::from_terms(n, terms, &z)
}

pub fn upoly(p: u64, c: &[i64]) -> UPoly<Fp> {
    UPoly::new(c.iter().map(|&x| Fp::new(x, p)).collect(), Fp::zero(p))
}

pub fn rand_upoly(p: u64, deg: usize, rng: &mut impl Rng) -> UPoly<Fp> {
    UPoly::new((0..=deg).map(|_| Fp::random(p, rng)).collect(), Fp::zero(p))
}

pub fn rand_monic(p: u64, deg: usize, rng: &mut impl Rng) -> UPoly<Fp> {
    let mut c: Vec<Fp> = (0..deg).map(|_| Fp::random(p, rng)).collect();
    c.push(Fp::one(p));
    UPoly::new(c, Fp::zero(p))
}

/// Roots in 𝔽_p by trying every element.
pub fn brute_roots(f: &UPoly<Fp>) -> Vec<u64> {
    let p = f.zero_coeff().modulus();
    (0..p).filter(|&x| f.eval(&Fp::from_u64(x, p)).is_zero()).collect()
}

pub fn values(pts: &[Vec<Fp>]) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = pts.iter().map(|pt| pt.iter().map(Fp::value).collect()).collect();
    v.sort();
    v
}

/// Re-emit every gate of `c` into `b`; returns the images of its outputs.
pub fn embed(b: &mut Builder, c: &Circuit) -> Vec<usize> {
    let mut map = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let x = b.copy_gate(g, &map);
        map.push(x);
    }
    c.outputs().iter().map(|&o| map[o]).collect()
}

pub fn single(p: u64, n: usize, muls: usize, max_degree: u32, rng: &mut impl Rng) -> Circuit {
    random_circuit(p, RandomSpec { inputs: n, muls, outputs: 1, max_degree }, rng)
}

/// A circuit with divisions that computes a polynomial, the division-free
/// circuit for the same polynomial, and a center. When `vanishing` is set the
/// center is a zero of a denominator.
pub struct DivisionCase {
    pub with_div: Circuit,
    pub reference: Circuit,
    pub center: Vec<Fp>,
    pub degree: u32,
}

impl DivisionCase {
    /// Every denominator is nonzero at the center.
    pub fn precondition(&self) -> bool {
        self.with_div.eval_fp(&self.center).is_ok()
    }
}

pub fn division_case(p: u64, n: usize, vanishing: bool, rng: &mut impl Rng) -> DivisionCase {
    let a = single(p, n, rng.gen_range(1..5), 4, rng);
    let den = single(p, n, rng.gen_range(1..3), 3, rng);
    let center: Vec<Fp> = (0..n).map(|_| Fp::random(p, rng)).collect();
    let mut b = Builder::new(p, n);
    let fa = embed(&mut b, &a)[0];
    let mut fd = embed(&mut b, &den)[0];
    if vanishing {
        // x₁ − c₁ divides the denominator
        let x = b.input(0);
        let c = b.constant(center[0]);
        let lin = b.sub(x, c);
        fd = b.mul(fd, lin);
    }
    let num = b.mul(fa, fd);
    let mut out = b.div(num, fd);
    if rng.gen_bool(0.5) {
        // a second, nested quotient
        let e = single(p, n, 1, 2, rng);
        let fe = embed(&mut b, &e)[0];
        let one = b.int(1);
        let fe = b.add(fe, one);
        let t = b.mul(out, fe);
        out = b.div(t, fe);
    }
    let with_div = b.finish(vec![out]);
    let degree = a.syntactic_degrees()[a.outputs()[0]].expect("division-free");
    DivisionCase { with_div, reference: a, center, degree }
}

/// Random q(Y, T) = T^m + Σ c_i(Y) T^i with deg c_i ≤ m − i.
pub fn random_monic_bivariate(p: u64, m: usize, rng: &mut impl Rng) -> UPoly<MPoly<Fp>> {
    let z = Fp::zero(p);
    let mut cs: Vec<MPoly<Fp>> = (0..m).map(|i| rand_poly(p, 1, (m - i) as u32, rng)).collect();
    cs.push(MPoly::constant(Fp::one(p), 1));
    UPoly::new(cs, MPoly::zero(1, &z))
}

/// Root branches of q over Y = η + Z, by Newton's method on q itself.
pub fn branches(q: &UPoly<MPoly<Fp>>, eta: Fp, kappa: u32, rng: &mut impl Rng) -> Option<Vec<Series<FieldElement>>> {
    let qe = specialize_upoly(q, &[eta], eta.modulus());
    if geores::poly::discriminant(&qe).ok()?.is_zero() {
        return None;
    }
    let (ctx, roots) = find_roots(&qe, rng).ok()?;
    let like = ctx.zero();
    let coeffs: Vec<Series<FieldElement>> = q
        .coeffs()
        .iter()
        .map(|c| Series::from_mpoly(&shift_mpoly(c, &[eta]), kappa).map(|x| ctx.from_base(*x)))
        .collect();
    let dq: Vec<Series<FieldElement>> = (1..coeffs.len()).map(|i| coeffs[i].mul(&coeffs[i].from_int(i as i64))).collect();
    let horner = |cs: &[Series<FieldElement>], u: &Series<FieldElement>| {
        cs.iter().rev().fold(Series::zero(1, kappa, &like), |acc, c| acc.mul(u).add(c))
    };
    let mut out = Vec::new();
    for r in roots {
        let mut u = Series::constant(r, 1, kappa);
        for _ in 0..8 {
            let step = horner(&coeffs, &u).mul(&horner(&dq, &u).invert().ok()?);
            u = u.sub(&step);
        }
        assert!(horner(&coeffs, &u).is_zero());
        out.push(u);
    }
    Some(out)
}

/// One equation of degree δ in two variables followed by a line, so the
/// first level has a resolution of degree δ over one free variable.
pub fn curve_then_line(p: u64, delta: u32, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = rand_poly(p, 2, delta, &mut rng);
    let g = rand_poly(p, 2, 1, &mut rng);
    Circuit::from_polys(p, 2, &[f, g])
}
