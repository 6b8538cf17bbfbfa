//! Rebuilding a resolution from one unramified fiber by Newton–Hensel
//! lifting in truncated power series.

use std::sync::Arc;

use serde::Serialize;

use crate::circuit::{gradient, Circuit};
use crate::error::{Error, Result};
use crate::field::{find_roots, FieldContext, FieldElement, FiniteField, Fp};
use crate::matrix::Matrix;
use crate::mpoly::MPoly;
use crate::poly::{discriminant, resultant_monic, vandermonde_solve, UPoly};
use crate::quotient::{Frac, QElem};
use crate::resolution::{shift_mpoly, specialize_upoly, x_from_y, GeometricResolution, Mode};
use crate::ring::Ring;
use crate::series::Series;

/// Truncation order used by the lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Precision {
    /// κ = 2δ̄³.
    Safe,
    /// κ = δ̄² + 1, falling back to `Safe` when the result does not validate.
    Sharp,
}

impl Precision {
    pub fn kappa(self, delta: usize) -> u32 {
        let d = delta as u32;
        match self {
            Precision::Safe => 2 * d * d * d,
            Precision::Sharp => d * d + 1,
        }
    }
}

/// Number of Newton steps for a fiber of δ̄ points: 3⌈log₂ δ̄⌉ + 2.
pub fn newton_steps(delta: usize) -> usize {
    let mut c = 0;
    while (1usize << c) < delta {
        c += 1;
    }
    3 * c + 2
}

/// An unramified fiber over η.
#[derive(Clone, Debug)]
pub struct LiftingFiber {
    pub eta: Vec<Fp>,
    pub ctx: Arc<FieldContext>,
    /// Roots of q(η, T), sorted.
    pub zeta: Vec<FieldElement>,
    /// Dependent coordinates of each fiber point.
    pub xi: Vec<Vec<FieldElement>>,
    pub mu_eta: Fp,
    /// Candidates rejected before η was accepted.
    pub rejected: usize,
}

/// What one compression did.
#[derive(Clone, Debug, Serialize)]
pub struct CompressRecord {
    #[serde(serialize_with = "crate::field::serialize_decimals")]
    pub eta: Vec<u64>,
    pub rejected: usize,
    pub extension_degree: usize,
    pub kappa: u32,
    pub newton_steps: usize,
    pub precisions: Vec<u32>,
    pub sharp_fallback: bool,
}

type Base = MPoly<Fp>;

/// Coordinates X as fractions over k[Y_free][T]/q with denominator v_den.
pub(crate) fn param_coords(
    res: &GeometricResolution,
    pinv: &Matrix<Fp>,
) -> (Arc<UPoly<Base>>, Vec<Frac<QElem<Base>>>) {
    let m = Arc::new(res.q.clone());
    let z = res.rho.zero_like();
    let den = Arc::new(QElem::constant(res.v_den.clone(), &m));
    let mut y: Vec<Frac<QElem<Base>>> = (0..res.r)
        .map(|k| Frac::new(QElem::constant(MPoly::var(k, res.r, z.coeff_zero()), &m), 0, &den))
        .collect();
    for v in &res.v {
        y.push(Frac::new(QElem::new(v.clone(), m.clone()), 1, &den));
    }
    (m, x_from_y(pinv, &y))
}

/// Gradient circuits of each output, as one circuit with n·s outputs.
pub(crate) fn gradients(eqs: &Circuit) -> Result<Circuit> {
    let n = eqs.num_inputs();
    let mut gates = Vec::new();
    let mut outs = Vec::new();
    for k in 0..eqs.num_outputs() {
        let g = gradient(&eqs.select_outputs(&[k]))?;
        let off = gates.len();
        for gate in g.gates() {
            gates.push(shift_gate(*gate, off));
        }
        outs.extend(g.outputs().iter().map(|o| o + off));
    }
    debug_assert_eq!(outs.len(), n * eqs.num_outputs());
    Circuit::new(eqs.modulus(), n, gates, outs)
}

fn shift_gate(g: crate::circuit::Gate, off: usize) -> crate::circuit::Gate {
    use crate::circuit::Gate::*;
    match g {
        Input(i) => Input(i),
        Const(c) => Const(c),
        Add(a, b) => Add(a + off, b + off),
        Sub(a, b) => Sub(a + off, b + off),
        Mul(a, b) => Mul(a + off, b + off),
        Div(a, b) => Div(a + off, b + off),
        Scale(c, a) => Scale(c, a + off),
    }
}

/// ∂f_k/∂Y_{r+j} from the X-gradients: row k, column j.
fn dependent_jacobian<R: Ring>(grads: &[R], pinv: &Matrix<Fp>, n: usize, r: usize) -> Matrix<R> {
    let m = grads.len() / n;
    let like = &grads[0];
    let mut jac = Matrix::zeros(m, n - r, like);
    for k in 0..m {
        for j in 0..n - r {
            let mut acc = like.zero_like();
            for i in 0..n {
                let c = *pinv.get(i, r + j);
                if !c.is_zero() {
                    acc = acc.add(&grads[k * n + i].mul(&like.from_base(c)));
                }
            }
            jac.set(k, j, acc);
        }
    }
    jac
}

/// Norm of the Jacobian determinant of the dependent block, as a polynomial
/// in the free variables: the constant term of its characteristic polynomial
/// modulo q.
pub fn jacobian_mu(eqs: &Circuit, res: &GeometricResolution) -> Result<MPoly<Fp>> {
    let (n, r) = (res.n, res.r);
    if eqs.num_outputs() != n - r {
        return Err(Error::Arity { expected: n - r, got: eqs.num_outputs() });
    }
    let pinv = res.inverse_change()?;
    let (m, x) = param_coords(res, &pinv);
    let grads = gradients(eqs)?;
    let like = x.first().map(|v| v.zero_like()).ok_or(Error::Invalid("no variables".into()))?;
    let vals = grads.evaluate(&x, &like)?;
    let det = dependent_jacobian(&vals, &pinv, n, r).det();
    let e = det.exponent();
    let num = det.numerator();
    let delta = res.degree();
    let cp = crate::matrix::berkowitz_charpoly(&num.poly().mul_matrix(&m))?;
    let c0 = cp.coeff(0);
    let mu = c0
        .div_exact(&res.v_den.pow(u64::from(e) * delta as u64))
        .ok_or_else(|| Error::Certificate("Jacobian norm is not divisible by the denominator".into()))?;
    if mu.is_zero() {
        return Err(Error::Hypothesis("Jacobian determinant is a zero divisor; the system is not radical".into()));
    }
    Ok(mu)
}

/// Norm of the dependent Jacobian determinant over the fiber at η, i.e. the
/// value μ(η) up to a unit; `None` when η lies on the denominator.
pub fn jacobian_norm_at(eqs: &Circuit, grads: &Circuit, res: &GeometricResolution, pinv: &Matrix<Fp>, eta: &[Fp]) -> Result<Option<Fp>> {
    let (n, r, p) = (res.n, res.r, res.p);
    if eqs.num_outputs() != n - r {
        return Err(Error::Arity { expected: n - r, got: eqs.num_outputs() });
    }
    let Some(den_inv) = res.v_den.eval(eta).inv() else { return Ok(None) };
    let m = Arc::new(specialize_upoly(&res.q, eta, p));
    let mut y: Vec<QElem<Fp>> = eta.iter().map(|&e| QElem::constant(e, &m)).collect();
    for v in &res.v {
        y.push(QElem::new(specialize_upoly(v, eta, p).scale(&den_inv), m.clone()));
    }
    let x = x_from_y(pinv, &y);
    let Ok(vals) = grads.evaluate(&x, &QElem::constant(Fp::zero(p), &m)) else { return Ok(None) };
    let det = dependent_jacobian(&vals, pinv, n, r).det();
    Ok(Some(resultant_monic(&m, det.poly())?))
}

/// Seeded search for η with ρ(η)·μ(η) ≠ 0, then the fiber over it.
///
/// μ is tested pointwise through [`jacobian_norm_at`]; when every candidate
/// off the discriminant fails that test the Jacobian is taken to be a zero
/// divisor and the system reported as not radical.
pub fn choose_fiber<G: rand::Rng + ?Sized>(
    eqs: &Circuit,
    res: &GeometricResolution,
    rng: &mut G,
) -> Result<LiftingFiber> {
    let p = res.p;
    let pinv = res.inverse_change()?;
    let grads = gradients(eqs)?;
    const BUDGET: usize = 64;
    let mut rejected = 0;
    let mut singular = 0;
    for _ in 0..BUDGET {
        let eta: Vec<Fp> = (0..res.r).map(|_| Fp::random(p, rng)).collect();
        let den = res.v_den.eval(&eta);
        if res.rho.eval(&eta).is_zero() || den.is_zero() {
            rejected += 1;
            continue;
        }
        let mu_eta = jacobian_norm_at(eqs, &grads, res, &pinv, &eta)?.unwrap_or_else(|| Fp::zero(p));
        if mu_eta.is_zero() {
            rejected += 1;
            singular += 1;
            continue;
        }
        let den_inv = den.inv().unwrap();
        let qe = specialize_upoly(&res.q, &eta, p);
        let (ctx, zeta) = find_roots(&qe, rng)?;
        let vs: Vec<UPoly<Fp>> = res.v.iter().map(|v| specialize_upoly(v, &eta, p).scale(&den_inv)).collect();
        let xi: Vec<Vec<FieldElement>> =
            zeta.iter().map(|t| vs.iter().map(|v| v.eval_with(t, |c| ctx.from_base(*c))).collect()).collect();
        let bad = match &res.mode {
            Mode::Affine => false,
            Mode::Toric | Mode::Avoid(_) => xi.iter().any(|dep| {
                let mut y: Vec<FieldElement> = eta.iter().map(|&e| ctx.from_base(e)).collect();
                y.extend(dep.iter().cloned());
                let x = x_from_y(&pinv, &y);
                match &res.mode {
                    Mode::Toric => x.iter().any(|c| c.is_zero()),
                    Mode::Avoid(g) => g.evaluate(&x, &ctx.zero()).map_or(true, |v| v.iter().any(|c| c.is_zero())),
                    Mode::Affine => false,
                }
            }),
        };
        if bad {
            rejected += 1;
            continue;
        }
        return Ok(LiftingFiber { eta, ctx, zeta, xi, mu_eta, rejected });
    }
    if singular == BUDGET {
        return Err(Error::Hypothesis("Jacobian determinant is a zero divisor; the system is not radical".into()));
    }
    Err(Error::Genericity(format!("no good lifting point among {BUDGET} candidates")))
}

/// Newton iteration for the dependent coordinates of one branch.
///
/// Runs exactly `steps` iterations; step s works modulo (Z)^{min(2^s − 1, κ)+1}
/// where Z = Y_free − η. Returns the lifted series and the precision of
/// every step.
pub fn newton_lift<F: FiniteField>(
    eqs: &Circuit,
    grads: &Circuit,
    pinv: &Matrix<Fp>,
    eta: &[Fp],
    start: &[F],
    kappa: u32,
    steps: usize,
) -> Result<(Vec<Series<F>>, Vec<u32>)> {
    let n = eqs.num_inputs();
    let r = eta.len();
    let like = start.first().ok_or(Error::Invalid("nothing to lift".into()))?;
    let mut y: Vec<Series<F>> = start.iter().map(|s| Series::constant(s.clone(), r, 0)).collect();
    let mut precs = Vec::with_capacity(steps);
    for s in 1..=steps {
        let prec = if s >= 32 { kappa } else { ((1u64 << s) - 1).min(u64::from(kappa)) as u32 };
        precs.push(prec);
        let zero = Series::zero(r, prec, like);
        let mut full: Vec<Series<F>> = (0..r)
            .map(|k| Series::var(k, r, prec, like).add(&zero.from_base(eta[k])))
            .collect();
        full.extend(y.iter().map(|c| c.with_kappa(prec)));
        let x = x_from_y(pinv, &full);
        let f = eqs.evaluate(&x, &zero)?;
        let g = grads.evaluate(&x, &zero)?;
        let jac = dependent_jacobian(&g, pinv, n, r);
        let delta = jac
            .solve(&f)
            .ok_or_else(|| Error::Certificate("Jacobian not invertible along the lifting".into()))?;
        y = full[r..].iter().zip(&delta).map(|(a, b)| a.sub(b)).collect();
    }
    Ok((y, precs))
}

fn series_to_base<F: FiniteField>(s: &Series<F>, bound: u32) -> Result<MPoly<Fp>> {
    let m = s.with_kappa(bound).to_mpoly();
    let p = m.characteristic();
    let mut terms = Vec::new();
    for (e, c) in m.terms() {
        let b = c.to_base().ok_or_else(|| Error::Certificate("lifted coefficient outside the base field".into()))?;
        terms.push((e.clone(), b));
    }
    Ok(MPoly::from_terms(m.nvars(), terms, &Fp::zero(p)))
}

fn unshift(m: &MPoly<Fp>, eta: &[Fp]) -> MPoly<Fp> {
    let neg: Vec<Fp> = eta.iter().map(|e| e.neg()).collect();
    shift_mpoly(m, &neg)
}

/// q = ∏(T − ũ_l), coefficients truncated at total degree δ̄ and shifted back to Y.
pub fn recover_q<F: FiniteField>(us: &[Series<F>], eta: &[Fp]) -> Result<UPoly<MPoly<Fp>>> {
    let delta = us.len() as u32;
    let like = us.first().ok_or(Error::Invalid("no branches".into()))?.with_kappa(delta);
    let mut q = UPoly::constant(like.one_like());
    for u in us {
        let lin = UPoly::new(vec![u.with_kappa(delta).neg(), like.one_like()], like.zero_like());
        q = q.mul(&lin);
    }
    let p = eta.first().map_or_else(|| like.characteristic(), |e| e.modulus());
    let z = MPoly::zero(eta.len(), &Fp::zero(p));
    let cs: Result<Vec<MPoly<Fp>>> = q.coeffs().iter().map(|c| Ok(unshift(&series_to_base(c, delta)?, eta))).collect();
    Ok(UPoly::new(cs?, z))
}

/// Solve v_j(ũ_l) = ρ·R̃_j^{(l)} for every dependent j by Vandermonde interpolation.
pub fn recover_v<F: FiniteField>(
    us: &[Series<F>],
    branches: &[Vec<Series<F>>],
    rho: &MPoly<Fp>,
    eta: &[Fp],
    kappa: u32,
) -> Result<Vec<UPoly<MPoly<Fp>>>> {
    let like = us.first().ok_or(Error::Invalid("no branches".into()))?;
    let rho_s = Series::from_mpoly(&shift_mpoly(rho, eta), kappa).map(|c| like.constant_term().from_base(*c));
    let ndep = branches[0].len();
    let z = MPoly::zero(eta.len(), &Fp::zero(rho.characteristic()));
    let mut out = Vec::with_capacity(ndep);
    for j in 0..ndep {
        let rhs: Vec<Series<F>> = branches.iter().map(|b| rho_s.mul(&b[j])).collect();
        let coeffs = vandermonde_solve(us, &rhs)?;
        let cs: Result<Vec<MPoly<Fp>>> = coeffs.iter().map(|c| Ok(unshift(&series_to_base(c, kappa)?, eta))).collect();
        out.push(UPoly::new(cs?, z.clone()));
    }
    Ok(out)
}

/// Recompute q, ρ and the v_j of `res` from a single lifting fiber.
///
/// `eqs` are the equations defining the variety (one per dependent variable).
pub fn compress<G: rand::Rng + ?Sized>(
    eqs: &Circuit,
    res: &GeometricResolution,
    precision: Precision,
    rng: &mut G,
) -> Result<(GeometricResolution, CompressRecord)> {
    if res.r == 0 || res.degree() == 0 {
        let rec = CompressRecord {
            eta: Vec::new(),
            rejected: 0,
            extension_degree: 1,
            kappa: 0,
            newton_steps: 0,
            precisions: Vec::new(),
            sharp_fallback: false,
        };
        return Ok((res.clone(), rec));
    }
    let fiber = choose_fiber(eqs, res, rng)?;
    let pinv = res.inverse_change()?;
    let grads = gradients(eqs)?;
    let delta = res.degree();
    let steps = newton_steps(delta);
    let mut prec = precision;
    let mut fallback = false;
    loop {
        let kappa = prec.kappa(delta);
        let mut slots: Vec<Option<Vec<Series<FieldElement>>>> = vec![None; delta];
        let mut precisions = Vec::new();
        for l in 0..delta {
            if slots[l].is_some() {
                continue;
            }
            let (b, pr) = newton_lift(eqs, &grads, &pinv, &fiber.eta, &fiber.xi[l], kappa, steps)?;
            precisions = pr;
            // the data are defined over 𝔽_p, so the lift at ζ^p is the conjugate series
            let (mut z, mut cur) = (fiber.zeta[l].frobenius(), b.clone());
            slots[l] = Some(b);
            while z != fiber.zeta[l] {
                cur = cur.iter().map(|s| s.map(FiniteField::frobenius)).collect();
                let k = fiber.zeta.iter().position(|t| *t == z).ok_or_else(|| Error::Certificate("fiber is not Frobenius-stable".into()))?;
                slots[k] = Some(cur.clone());
                z = z.frobenius();
            }
        }
        let branches: Vec<Vec<Series<FieldElement>>> = slots.into_iter().map(|b| b.expect("every root lifted")).collect();
        let us: Vec<Series<FieldElement>> = branches
            .iter()
            .map(|b| {
                let mut u = b[0].zero_like();
                for (l, s) in res.lambda.iter().zip(b) {
                    u = u.add(&s.mul(&s.from_base(*l)));
                }
                u
            })
            .collect();
        let q = recover_q(&us, &fiber.eta)?;
        let rho = discriminant(&q)?;
        let v = recover_v(&us, &branches, &rho, &fiber.eta, kappa)?;
        let out = GeometricResolution { q, rho: rho.clone(), v, v_den: rho, ..res.clone() };
        let rec = CompressRecord {
            eta: fiber.eta.iter().map(|e| e.value()).collect(),
            rejected: fiber.rejected,
            extension_degree: fiber.ctx.degree(),
            kappa,
            newton_steps: steps,
            precisions,
            sharp_fallback: fallback,
        };
        if prec == Precision::Sharp && !out.validate(eqs).ok() {
            prec = Precision::Safe;
            fallback = true;
            continue;
        }
        return Ok((out, rec));
    }
}
