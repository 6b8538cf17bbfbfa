//! The elimination recursion: one equation per level, each level made of a
//! Noether normalization, a primitive-element computation, a cleaning gcd and
//! a compression by lifting.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{eliminate_divisions, generic_combinations, omega_for_depth, pit_is_zero, Builder, Circuit, CorrectTestSequence, CostProfile};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::lifting::{compress, param_coords, CompressRecord, Precision};
use crate::matrix::{berkowitz_charpoly, Matrix};
use crate::mpoly::MPoly;
use crate::poly::{charpoly_mod, discriminant, poly_gcd, poly_gcd_many, poly_xgcd, squarefree_part, UPoly};
use crate::quotient::{Jet, QElem};
use crate::resolution::{shift_mpoly, specialize_upoly, x_from_y, GeometricResolution, Mode};
use crate::series::Series;
use crate::ring::Ring;

type K = MPoly<Fp>;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: Mode,
    pub seed: u64,
    /// Restarts with a fresh random change of variables after unlucky choices.
    pub retries: usize,
    pub precision: Precision,
    /// Validate the resolution after every level.
    pub verify: bool,
    /// Degree bounds per equation; required when the input divides.
    pub degree_bounds: Option<Vec<u32>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { mode: Mode::Affine, seed: 0, retries: 8, precision: Precision::Safe, verify: true, degree_bounds: None }
    }
}

/// Log entry for one level of the recursion.
#[derive(Clone, Debug, Serialize)]
pub struct EliminationStep {
    pub level: usize,
    pub free_before: usize,
    pub minpoly_degree: usize,
    /// Exponent k of the denominator cleared before the characteristic polynomial.
    pub rho_exponent: u32,
    pub a0_degree: i64,
    pub a0_squarefree_degree: usize,
    #[serde(serialize_with = "crate::field::serialize_decimals")]
    pub gamma: Vec<u64>,
    pub algebra_rank: usize,
    #[serde(serialize_with = "crate::field::serialize_decimals")]
    pub lambda: Vec<u64>,
    pub lambda_attempts: usize,
    pub candidate_degree: usize,
    pub h_degree: usize,
    pub h1_degree: usize,
    pub degree: usize,
    pub rho_degree: i64,
    /// Largest total degree among ρ and the coefficients of the v_j.
    pub max_total_degree: i64,
    pub compress: Option<CompressRecord>,
}

/// Result of [`solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub resolution: GeometricResolution,
    pub steps: Vec<EliminationStep>,
    /// Rows of the random combination applied to the equations.
    pub combination: Vec<Vec<Fp>>,
    pub attempts: usize,
    pub input_cost: CostProfile,
    pub omega: u128,
}

impl Solution {
    /// deg_T q at every level.
    pub fn degree_ledger(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.degree).collect()
    }
}

/// Minimal polynomial of g on the variety, with the denominator exponent used.
fn minpoly_with_exponent(res: &GeometricResolution, g: &Circuit) -> Result<(UPoly<K>, u32)> {
    if g.num_outputs() != 1 {
        return Err(Error::NotSingleOutput(g.num_outputs()));
    }
    let pinv = res.inverse_change()?;
    let (m, x) = param_coords(res, &pinv);
    let like = x[0].zero_like();
    let val = g.evaluate(&x, &like)?.remove(0);
    let e = val.exponent();
    let delta = res.degree();
    let cp = charpoly_mod(val.numerator().poly(), &m)?;
    let mut cs = Vec::with_capacity(delta + 1);
    for (k, c) in cp.coeffs().iter().enumerate() {
        let d = res.v_den.pow(u64::from(e) * (delta - k) as u64);
        cs.push(c.div_exact(&d).ok_or_else(|| Error::Certificate("characteristic polynomial not integral".into()))?);
    }
    let chi = UPoly::new(cs, res.rho.zero_like());
    Ok((squarefree_part(&chi)?.0, e))
}

/// Monic minimal polynomial over the free variables of the function g on the variety.
pub fn homothety_minpoly(res: &GeometricResolution, g: &Circuit) -> Result<UPoly<MPoly<Fp>>> {
    Ok(minpoly_with_exponent(res, g)?.0)
}

/// Output of the Noether normalization.
pub struct NoetherStep {
    /// The resolution rewritten in the new free coordinates (still r free).
    pub res: GeometricResolution,
    /// Squarefree a₀, monic in the last free variable, over the others.
    pub a0: UPoly<MPoly<Fp>>,
    pub minpoly_degree: usize,
    pub rho_exponent: u32,
    pub a0_degree: i64,
    pub gamma: Vec<Fp>,
}

/// Compute a₀ and change the free variables so that it is monic in the last
/// one. Returns `None` when a₀ is a nonzero constant (the next variety is empty).
pub fn noether_step<G: rand::Rng + ?Sized>(res: &GeometricResolution, g: &Circuit, rng: &mut G) -> Result<Option<NoetherStep>> {
    let (mg, e) = minpoly_with_exponent(res, g)?;
    let a0 = mg.coeff(0);
    if a0.is_zero() {
        return Err(Error::Hypothesis("equation is a zero divisor modulo the previous ones".into()));
    }
    if a0.is_constant() {
        return Ok(None);
    }
    let (p, r, n) = (res.p, res.r, res.n);
    let deg = a0.total_degree() as u32;
    let top = a0.component(deg);
    let mut gamma = vec![Fp::zero(p); r - 1];
    let mut found = false;
    for attempt in 0..33 {
        if attempt > 0 {
            gamma = (0..r - 1).map(|_| Fp::random(p, rng)).collect();
        }
        let mut pt = gamma.clone();
        pt.push(Fp::one(p));
        if !top.eval(&pt).is_zero() {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::Genericity("no change of free variables makes a₀ monic".into()));
    }
    let z = Fp::zero(p);
    let images: Vec<K> = (0..r)
        .map(|k| {
            let last = MPoly::var(r - 1, r, &z);
            if k + 1 < r {
                MPoly::var(k, r, &z).add(&last.scale(&gamma[k]))
            } else {
                last
            }
        })
        .collect();
    let identity = gamma.iter().all(|g| g.is_zero());
    let sub = |m: &K| if identity { m.clone() } else { m.substitute(&images) };
    let subu = |u: &UPoly<K>| u.map(u.zero_coeff(), |c| sub(c));
    let mut ainv = Matrix::identity(n, &z);
    for (k, gk) in gamma.iter().enumerate() {
        ainv.set(k, r - 1, gk.neg());
    }
    let res2 = GeometricResolution {
        change: ainv.mul(&res.change),
        q: subu(&res.q),
        rho: sub(&res.rho),
        v: res.v.iter().map(subu).collect(),
        v_den: sub(&res.v_den),
        ..res.clone()
    };
    let a0c = sub(&a0);
    let mut lead_exp = vec![0u32; r];
    lead_exp[r - 1] = deg;
    let lc = a0c.coeff(&lead_exp).inv().ok_or_else(|| Error::Certificate("a₀ lost its leading term".into()))?;
    let a0u = a0c.scale(&lc).to_univariate_last();
    let (a0s, _) = squarefree_part(&a0u)?;
    Ok(Some(NoetherStep { res: res2, a0: a0s, minpoly_degree: mg.degree() as usize, rho_exponent: e, a0_degree: deg as i64, gamma }))
}

/// Candidate resolution of the next variety, before cleaning.
pub struct PrimitiveStep {
    pub q: UPoly<MPoly<Fp>>,
    pub rho: MPoly<Fp>,
    /// Parametrizations of (new dependent, old dependents…).
    pub v: Vec<UPoly<MPoly<Fp>>>,
    pub lambda: Vec<Fp>,
    pub rank: usize,
    pub attempts: usize,
}

/// (k[Z'][y]/a₀)[T]/q_old over a coefficient ring C standing for k[Z'].
struct Algebra<C: Ring> {
    ma: Arc<UPoly<C>>,
    mb: Arc<UPoly<QElem<C>>>,
    da: usize,
    delta: usize,
}

impl<C: Ring> Algebra<C> {
    fn a_zero(&self) -> QElem<C> {
        QElem::constant(self.ma.zero_coeff().clone(), &self.ma)
    }

    fn rank(&self) -> usize {
        self.da * self.delta
    }

    fn coords(&self, b: &QElem<QElem<C>>) -> Vec<C> {
        (0..self.delta).flat_map(|t| b.poly().coeff(t).coords()).collect()
    }

    fn basis(&self, j: usize) -> QElem<QElem<C>> {
        let (t, k) = (j / self.da, j % self.da);
        let yk = QElem::new(UPoly::monomial(self.ma.zero_coeff().one_like(), k), self.ma.clone());
        QElem::new(UPoly::monomial(yk, t), self.mb.clone())
    }

    fn mult_matrix(&self, x: &QElem<QElem<C>>, basis: &[QElem<QElem<C>>]) -> Matrix<C> {
        let n = self.rank();
        let mut m = Matrix::zeros(n, n, self.ma.zero_coeff());
        for (j, b) in basis.iter().enumerate() {
            for (i, c) in self.coords(&x.mul(b)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

/// Primitive element and parametrization for the points of the old variety
/// lying over the zeros of a₀, in the algebra (k[Z'][y]/a₀)[T]/q_old.
pub fn primitive_step<G: rand::Rng + ?Sized>(res: &GeometricResolution, a0: &UPoly<MPoly<Fp>>, rng: &mut G) -> Result<PrimitiveStep> {
    if a0.zero_coeff().nvars() > 0 {
        let (q, rho, v, lambda, rank, attempts) = primitive_core(res, a0, &|m: &K| m.clone(), rng)?;
        return Ok(PrimitiveStep { q, rho, v, lambda, rank, attempts });
    }
    // no free variables left: work over the prime field directly
    let zf = Fp::zero(res.p);
    let a0f = a0.map(&zf, |c| c.constant_term());
    let (q, rho, v, lambda, rank, attempts) = primitive_core(res, &a0f, &|m: &K| m.constant_term(), rng)?;
    let kz = a0.zero_coeff().clone();
    let up = |u: &UPoly<Fp>| u.map(&kz, |c| MPoly::constant(*c, 0));
    Ok(PrimitiveStep { q: up(&q), rho: MPoly::constant(rho, 0), v: v.iter().map(up).collect(), lambda, rank, attempts })
}

type Core<C> = (UPoly<C>, C, Vec<UPoly<C>>, Vec<Fp>, usize, usize);

fn primitive_core<C: Ring, G: rand::Rng + ?Sized>(
    res: &GeometricResolution,
    a0: &UPoly<C>,
    down: &dyn Fn(&K) -> C,
    rng: &mut G,
) -> Result<Core<C>> {
    let p = res.p;
    let kz = a0.zero_coeff().clone();
    let ma = Arc::new(a0.clone());
    let da = a0.degree() as usize;
    let a_zero = QElem::constant(kz.clone(), &ma);
    let to_a = |m: &K| QElem::new(m.to_univariate_last().map(&kz, down), ma.clone());
    let qa = res.q.map(&a_zero, to_a);
    let alg = Algebra { ma: ma.clone(), mb: Arc::new(qa), da, delta: res.degree() };
    let to_b = |u: &UPoly<K>| QElem::new(u.map(&alg.a_zero(), to_a), alg.mb.clone());
    let rank = alg.rank();
    let mut e0 = vec![kz.zero_like(); da];
    e0[0] = kz.one_like();
    let rho_a = to_a(&res.v_den);
    let (dd, w) = rho_a.poly().mul_matrix(&ma).adjugate_apply(&e0)?;
    if dd.is_zero() {
        return Err(Error::Genericity("previous discriminant vanishes on the new variety".into()));
    }
    let rinv = QElem::constant(QElem::from_coords(&w, &ma), &alg.mb);
    let xhat: Vec<QElem<QElem<C>>> = res.v.iter().map(|v| to_b(v).mul(&rinv)).collect();
    let y_d = QElem::generator(&ma).mul(&QElem::constant(dd.clone(), &ma));
    let dy = QElem::constant(y_d, &alg.mb);
    let mut targets = vec![dy];
    targets.extend(xhat);
    let basis: Vec<QElem<QElem<C>>> = (0..rank).map(|j| alg.basis(j)).collect();
    let dpow: Vec<C> = (0..=rank).map(|k| dd.pow(k as u64)).collect();
    let scale_down = |cs: &[C]| -> Result<Vec<C>> {
        cs.iter()
            .enumerate()
            .map(|(m, c)| c.div_exact(&dpow[rank - m]).ok_or_else(|| Error::Certificate("inexact rescaling of a characteristic polynomial".into())))
            .collect()
    };
    let mut accepted = None;
    let mut attempts = 0;
    for _ in 0..8 {
        attempts += 1;
        let lambda: Vec<Fp> = (0..targets.len()).map(|_| Fp::random_nonzero(p, rng)).collect();
        let mut nelt = targets[0].zero_like();
        for (l, t) in lambda.iter().zip(&targets) {
            nelt = nelt.add(&t.mul(&t.from_base(*l)));
        }
        let mn = alg.mult_matrix(&nelt, &basis);
        let chi = berkowitz_charpoly(&mn)?;
        let chi_u = UPoly::new(scale_down(chi.coeffs())?, kz.clone());
        let rho_t = discriminant(&chi_u)?;
        if !rho_t.is_zero() {
            accepted = Some((lambda, mn, chi_u, rho_t));
            break;
        }
    }
    let Some((lambda, mn, q, rho)) = accepted else {
        return Err(Error::Genericity("no separating primitive element among 8 candidates".into()));
    };
    let mats: Vec<Matrix<C>> = targets.iter().map(|t| alg.mult_matrix(t, &basis)).collect();
    let nd = mats.len();
    let mut jm = Matrix::zeros(rank, rank, &Jet::constant(kz.clone(), nd));
    for i in 0..rank {
        for j in 0..rank {
            jm.set(i, j, Jet { v: mn.get(i, j).clone(), d: mats.iter().map(|m| m.get(i, j).clone()).collect() });
        }
    }
    let cpj = berkowitz_charpoly(&jm)?;
    let mut e0r = vec![kz.zero_like(); rank];
    e0r[0] = kz.one_like();
    let (res_qq, cw) = q.derivative().mul_matrix(&q).adjugate_apply(&e0r)?;
    let negate = (rank * rank.saturating_sub(1) / 2) % 2 == 1;
    let sres = if negate { res_qq.neg() } else { res_qq };
    if sres != rho {
        return Err(Error::Certificate("discriminant and resultant disagree".into()));
    }
    let mut c = UPoly::from_coords(&cw, &kz);
    if negate {
        c = c.neg();
    }
    let mut v = Vec::with_capacity(nd);
    for w in 0..nd {
        let psi: Vec<C> = (0..=rank).map(|m| cpj.coeff(m).d[w].clone()).collect();
        let psi = UPoly::new(scale_down(&psi)?, kz.clone());
        v.push(psi.mul(&c).neg().rem_monic(&q));
    }
    Ok((q, rho, v, lambda, rank, attempts))
}

/// Result of cleaning: the next resolution, or `None` when it is empty.
pub struct CleaningStep {
    pub res: Option<GeometricResolution>,
    pub h_degree: usize,
    pub h1_degree: usize,
}

/// Keep the factor of q̃ whose points satisfy `imposed`, then drop the
/// components the mode excludes, and renormalize v to the new discriminant.
pub fn cleaning_step<G: rand::Rng + ?Sized>(
    cand: &PrimitiveStep,
    base: &GeometricResolution,
    imposed: &Circuit,
    rng: &mut G,
) -> Result<CleaningStep> {
    let r = base.r - 1;
    let trial = GeometricResolution {
        r,
        lambda: cand.lambda.clone(),
        q: cand.q.clone(),
        rho: cand.rho.clone(),
        v: cand.v.clone(),
        v_den: cand.rho.clone(),
        ..base.clone()
    };
    let pinv = trial.inverse_change()?;
    let (_, x) = param_coords(&trial, &pinv);
    let like = x[0].zero_like();
    let fs: Vec<UPoly<K>> = imposed.evaluate(&x, &like)?.iter().map(|f| f.numerator().poly().clone()).collect();
    let h = fiber_gcd(&cand.q, &fs, rng)?;
    let g = match &base.mode {
        Mode::Affine => None,
        Mode::Toric => {
            let mut prod = like.one_like();
            for xi in &x {
                prod = prod.mul(xi);
            }
            Some(prod.numerator().poly().clone())
        }
        Mode::Avoid(g) => Some(g.evaluate(&x, &like)?.remove(0).numerator().poly().clone()),
    };
    let h1 = match g {
        None => UPoly::constant(cand.rho.one_like()),
        Some(g) => fiber_gcd(&h, &[g], rng)?,
    };
    let qn = h.div_exact_poly(&h1)?;
    let (hd, h1d) = (h.degree().max(0) as usize, h1.degree().max(0) as usize);
    if qn.degree() <= 0 {
        return Ok(CleaningStep { res: None, h_degree: hd, h1_degree: h1d });
    }
    let rho = discriminant(&qn)?;
    let c = cand.rho.div_exact(&rho).ok_or_else(|| Error::Certificate("discriminant of a factor does not divide".into()))?;
    let mut v = Vec::with_capacity(cand.v.len());
    for vj in &cand.v {
        let red = vj.rem_monic(&qn);
        let cs: Option<Vec<K>> = red.coeffs().iter().map(|a| a.div_exact(&c)).collect();
        let cs = cs.ok_or_else(|| Error::Certificate("parametrization does not renormalize exactly".into()))?;
        v.push(UPoly::new(cs, rho.zero_like()));
    }
    let res = GeometricResolution { q: qn, rho: rho.clone(), v, v_den: rho, ..trial };
    Ok(CleaningStep { res: Some(res), h_degree: hd, h1_degree: h1d })
}

/// Monic gcd over k(Z') of a monic squarefree q with the fs.
///
/// The gcd is taken on a random fiber and the factorization of q it induces
/// is Hensel-lifted. Exact divisibility of q and of every f by the lift,
/// together with equal degrees on the fiber, proves the result.
fn fiber_gcd<G: rand::Rng + ?Sized>(q: &UPoly<K>, fs: &[UPoly<K>], rng: &mut G) -> Result<UPoly<K>> {
    let kz = q.zero_coeff().clone();
    let r = kz.nvars();
    if r == 0 {
        let mut all = vec![q.clone()];
        all.extend(fs.iter().cloned());
        return poly_gcd_many(&all);
    }
    let p = kz.characteristic();
    let fs: Vec<UPoly<K>> = fs.iter().map(|f| f.rem_monic(q)).filter(|f| !f.is_zero()).collect();
    if fs.is_empty() {
        return Ok(q.clone());
    }
    for _ in 0..16 {
        let eta: Vec<Fp> = (0..r).map(|_| Fp::random(p, rng)).collect();
        let qe = specialize_upoly(q, &eta, p);
        if discriminant(&qe)?.is_zero() {
            continue;
        }
        let mut he = qe.clone();
        for f in &fs {
            he = poly_gcd(&he, &specialize_upoly(f, &eta, p))?;
        }
        if he.degree() == 0 {
            return Ok(UPoly::constant(kz.one_like()));
        }
        if he.degree() == qe.degree() {
            continue;
        }
        let Some(h) = hensel_factor(q, &eta, &qe, &he)? else { continue };
        if fs.iter().all(|f| f.rem_monic(&h).is_zero()) {
            return Ok(h);
        }
    }
    Err(Error::Genericity("no fiber certifies the cleaning gcd".into()))
}

/// Lift q(η) = h_η·k_η to a factorization of q over k[Z'], if one exists.
fn hensel_factor(q: &UPoly<K>, eta: &[Fp], qe: &UPoly<Fp>, he: &UPoly<Fp>) -> Result<Option<UPoly<K>>> {
    let kz = q.zero_coeff();
    let (r, p) = (kz.nvars(), kz.characteristic());
    let ke = qe.div_exact_poly(he)?;
    let (_, s0, t0) = poly_xgcd(he, &ke)?;
    let delta = q.degree() as i64;
    let wide = he.degree().max(ke.degree()) as i64;
    // roots have degree at most max D_m/(δ−m); coefficients of a factor are sums of products of them
    let bound = (0..delta)
        .map(|m| {
            let d = q.coeff(m as usize).total_degree().max(0);
            (d * wide + (delta - m) - 1) / (delta - m)
        })
        .max()
        .unwrap_or(0) as u32;
    let zs = Series::zero(r, bound, &Fp::zero(p));
    let lift = |u: &UPoly<Fp>| u.map(&zs, |c| Series::constant(*c, r, bound));
    let qs = q.map(&zs, |c| Series::from_mpoly(&shift_mpoly(c, eta), bound));
    let (s, t) = (lift(&s0), lift(&t0));
    let (mut h, mut k) = (lift(he), lift(&ke));
    for _ in 0..=bound {
        let e = qs.sub(&h.mul(&k));
        if e.is_zero() {
            break;
        }
        let (quo, dh) = t.mul(&e).divrem_monic(&h);
        let dk = s.mul(&e).add(&quo.mul(&k));
        h = h.add(&dh);
        k = k.add(&dk);
    }
    let back: Vec<Fp> = eta.iter().map(|c| c.neg()).collect();
    let hq = h.map(kz, |c| shift_mpoly(&c.to_mpoly(), &back));
    if !q.rem_monic(&hq).is_zero() {
        return Ok(None);
    }
    Ok(Some(hq))
}

/// Reject identically zero, constant and repeated equations by identity testing.
fn check_degenerate<G: rand::Rng + ?Sized>(sys: &Circuit, rng: &mut G) -> Result<()> {
    let cost = sys.measure();
    let cts = CorrectTestSequence::new(sys.modulus(), sys.num_inputs(), cost.depth, cost.size, rng)?;
    let s = sys.num_outputs();
    let origin = vec![Fp::zero(sys.modulus()); sys.num_inputs()];
    let at0 = sys.eval_fp(&origin)?;
    let mut b = Builder::new(sys.modulus(), sys.num_inputs());
    let mut map = vec![0; sys.gates().len()];
    for (i, g) in sys.gates().iter().enumerate() {
        map[i] = b.copy_gate(g, &map);
    }
    let mut outs = Vec::new();
    let mut what = Vec::new();
    for k in 0..s {
        let o = map[sys.outputs()[k]];
        outs.push(o);
        what.push(format!("equation {k} vanishes identically"));
        let c = b.constant(at0[k]);
        outs.push(b.sub(o, c));
        what.push(format!("equation {k} is constant"));
        for j in 0..k {
            let oj = map[sys.outputs()[j]];
            outs.push(b.sub(o, oj));
            what.push(format!("equations {j} and {k} coincide"));
        }
    }
    let probe = b.finish(outs);
    for (k, msg) in what.iter().enumerate() {
        if pit_is_zero(&probe.select_outputs(&[k]).pruned(), &cts)? {
            return Err(Error::Hypothesis(msg.clone()));
        }
    }
    Ok(())
}

fn random_invertible<G: rand::Rng + ?Sized>(p: u64, n: usize, rng: &mut G) -> Matrix<Fp> {
    loop {
        let rows: Vec<Vec<Fp>> = (0..n).map(|_| (0..n).map(|_| Fp::random(p, rng)).collect()).collect();
        let m = Matrix::from_rows(rows, &Fp::zero(p));
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn initial_resolution(p: u64, n: usize, change: Matrix<Fp>, mode: Mode) -> GeometricResolution {
    let z = MPoly::zero(n, &Fp::zero(p));
    let one = z.one_like();
    GeometricResolution { p, n, r: n, change, lambda: Vec::new(), q: UPoly::var(&z), rho: one.clone(), v: Vec::new(), v_den: one, mode }
}

/// Solve a system of at least n equations in n variables.
///
/// The returned resolution has no free variables; its points are the
/// isolated solutions (affine mode), those off the coordinate hyperplanes
/// (toric mode) or those off the avoided hypersurface.
pub fn solve(system: &Circuit, cfg: &SolverConfig) -> Result<Solution> {
    let p = system.modulus();
    let n = system.num_inputs();
    let s = system.num_outputs();
    if n == 0 {
        return Err(Error::Invalid("system has no variables".into()));
    }
    if s < n {
        return Err(Error::Hypothesis(format!("{s} equations in {n} variables do not define a finite set")));
    }
    let input_cost = system.measure();
    let omega = omega_for_depth(input_cost.depth);
    if (p as u128) < omega {
        return Err(Error::FieldTooSmall { p, need: u64::try_from(omega).unwrap_or(u64::MAX) });
    }
    if let Mode::Avoid(g) = &cfg.mode {
        if g.num_outputs() != 1 || g.num_inputs() != n || g.modulus() != p {
            return Err(Error::Invalid("avoided hypersurface must be one equation in the same variables and field".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let system = if system.has_division() {
        let bounds = cfg.degree_bounds.as_ref().ok_or_else(|| Error::Invalid("dividing circuits need degree bounds".into()))?;
        let top = bounds.iter().copied().max().unwrap_or(0);
        let mut out = None;
        for _ in 0..32 {
            let center: Vec<Fp> = (0..n).map(|_| Fp::random(p, &mut rng)).collect();
            match eliminate_divisions(system, &center, top) {
                Ok(c) => {
                    out = Some(c);
                    break;
                }
                Err(Error::DivisionByZero(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        out.ok_or_else(|| Error::Genericity("every expansion point hits a denominator".into()))?
    } else {
        system.clone()
    };
    check_degenerate(&system, &mut rng)?;
    let (eqs, combination) = generic_combinations(&system, n, &mut rng)?;
    let mut last_err = None;
    for attempt in 0..=cfg.retries {
        let change = if attempt == 0 { Matrix::identity(n, &Fp::zero(p)) } else { random_invertible(p, n, &mut rng) };
        match run_levels(&system, &eqs, change, cfg, &mut rng) {
            Ok((resolution, steps)) => {
                return Ok(Solution { resolution, steps, combination, attempts: attempt + 1, input_cost, omega });
            }
            Err(Error::Genericity(msg)) => last_err = Some(Error::Genericity(msg)),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Genericity("retry budget exhausted".into())))
}

fn run_levels<G: rand::Rng + ?Sized>(
    system: &Circuit,
    eqs: &Circuit,
    change: Matrix<Fp>,
    cfg: &SolverConfig,
    rng: &mut G,
) -> Result<(GeometricResolution, Vec<EliminationStep>)> {
    let (p, n) = (system.modulus(), system.num_inputs());
    let mut res = initial_resolution(p, n, change, cfg.mode.clone());
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let free_before = res.r;
        let g = eqs.select_outputs(&[i]);
        let Some(ns) = noether_step(&res, &g, rng)? else {
            return Ok((GeometricResolution::empty(p, n, res.change.clone(), cfg.mode.clone()), steps));
        };
        let cand = primitive_step(&ns.res, &ns.a0, rng)?;
        let prefix: Vec<usize> = (0..=i).collect();
        let level_eqs = eqs.select_outputs(&prefix);
        let imposed = if i + 1 == n { system.clone() } else { g.clone() };
        let cl = cleaning_step(&cand, &ns.res, &imposed, rng)?;
        let mut step = EliminationStep {
            level: i + 1,
            free_before,
            minpoly_degree: ns.minpoly_degree,
            rho_exponent: ns.rho_exponent,
            a0_degree: ns.a0_degree,
            a0_squarefree_degree: ns.a0.degree().max(0) as usize,
            gamma: ns.gamma.iter().map(|g| g.value()).collect(),
            algebra_rank: cand.rank,
            lambda: cand.lambda.iter().map(|l| l.value()).collect(),
            lambda_attempts: cand.attempts,
            candidate_degree: cand.q.degree().max(0) as usize,
            h_degree: cl.h_degree,
            h1_degree: cl.h1_degree,
            degree: 0,
            rho_degree: 0,
            max_total_degree: 0,
            compress: None,
        };
        let Some(next) = cl.res else {
            steps.push(step);
            return Ok((GeometricResolution::empty(p, n, ns.res.change.clone(), cfg.mode.clone()), steps));
        };
        if next.r > 0 {
            let (packed, rec) = compress(&level_eqs, &next, cfg.precision, rng)?;
            if packed.q != next.q || packed.rho != next.rho || packed.v != next.v {
                return Err(Error::Certificate(format!("level {}: lifted resolution differs from the symbolic one", i + 1)));
            }
            step.compress = Some(rec);
        }
        if cfg.verify {
            let check = if i + 1 == n { system } else { &level_eqs };
            let rep = next.validate(check);
            if !rep.ok() {
                let f = rep.failures();
                return Err(Error::Certificate(format!("level {}: {} failed: {}", i + 1, f[0].name, f[0].witness.clone().unwrap_or_default())));
            }
        }
        step.degree = next.degree();
        step.rho_degree = next.rho.total_degree();
        step.max_total_degree = next.max_total_degree();
        steps.push(step);
        res = next;
    }
    Ok((res, steps))
}

/// Characteristic polynomial of multiplication by H = Σ α_i X_i on a
/// zero-dimensional resolution; H vanishes on the variety when substituted.
pub fn eliminating_poly(res: &GeometricResolution, alpha: &[Fp]) -> Result<UPoly<Fp>> {
    if res.r != 0 {
        return Err(Error::Invalid("eliminating polynomial needs r = 0".into()));
    }
    if alpha.len() != res.n {
        return Err(Error::Arity { expected: res.n, got: alpha.len() });
    }
    if alpha.iter().all(|a| a.is_zero()) {
        return Err(Error::ZeroInput("linear form"));
    }
    let p = res.p;
    let q = crate::resolution::specialize_upoly(&res.q, &[], p);
    let m = Arc::new(q.clone());
    let den = res.v_den.eval(&[]).inv().ok_or(Error::ZeroDivisor)?;
    let y: Vec<QElem<Fp>> =
        res.v.iter().map(|v| QElem::new(crate::resolution::specialize_upoly(v, &[], p).scale(&den), m.clone())).collect();
    if y.is_empty() {
        return Ok(UPoly::constant(Fp::one(p)));
    }
    let x = x_from_y(&res.inverse_change()?, &y);
    let mut h = x[0].zero_like();
    for (a, xi) in alpha.iter().zip(&x) {
        h = h.add(&xi.mul(&xi.from_base(*a)));
    }
    charpoly_mod(h.poly(), &q)
}
