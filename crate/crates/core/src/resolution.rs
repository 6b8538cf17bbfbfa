//! Geometric resolutions: a primitive element u, its minimal polynomial q
//! over the free variables, and parametrizations ρ·Y_j = v_j(u) of the
//! dependent coordinates.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::field::{find_roots, FieldContext, FieldElement, FiniteField, Fp};
use crate::matrix::Matrix;
use crate::mpoly::MPoly;
use crate::poly::{discriminant, UPoly};
use crate::quotient::QElem;
use crate::ring::Ring;

/// Which components the resolution keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Affine,
    /// Drop components inside coordinate hyperplanes.
    Toric,
    /// Drop components inside the hypersurface g = 0 (single-output circuit).
    Avoid(Circuit),
}

impl Mode {
    pub fn tag(&self) -> &'static str {
        match self {
            Mode::Affine => "affine",
            Mode::Toric => "toric",
            Mode::Avoid(_) => "avoid",
        }
    }
}

/// Coordinates Y = P·X. The first r are free; for the others
/// v_den·Y_{r+j} = v_j(u) on the variety, where u = Σ λ_j Y_{r+j} and q(u) = 0.
#[derive(Clone, Debug)]
pub struct GeometricResolution {
    pub p: u64,
    pub n: usize,
    pub r: usize,
    pub change: Matrix<Fp>,
    pub lambda: Vec<Fp>,
    pub q: UPoly<MPoly<Fp>>,
    pub rho: MPoly<Fp>,
    pub v: Vec<UPoly<MPoly<Fp>>>,
    /// Equal to ρ except after specialization, where it is 1.
    pub v_den: MPoly<Fp>,
    pub mode: Mode,
}

/// Outcome of one invariant check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    fn push(&mut self, name: &'static str, pass: bool, witness: impl FnOnce() -> String) {
        let witness = if pass { None } else { Some(witness()) };
        self.checks.push(Check { name, pass, witness });
    }
}

/// X = P⁻¹·Y for values in any ring.
pub fn x_from_y<R: Ring>(pinv: &Matrix<Fp>, y: &[R]) -> Vec<R> {
    (0..pinv.rows())
        .map(|i| {
            let mut acc = y[0].zero_like();
            for (k, yk) in y.iter().enumerate() {
                let c = *pinv.get(i, k);
                if !c.is_zero() {
                    acc = acc.add(&yk.mul(&yk.from_base(c)));
                }
            }
            acc
        })
        .collect()
}

/// Coefficientwise evaluation of a polynomial in T over the free variables.
pub fn specialize_upoly(u: &UPoly<MPoly<Fp>>, point: &[Fp], p: u64) -> UPoly<Fp> {
    u.map(&Fp::zero(p), |c| c.eval(point))
}

/// Substitute Y_k ↦ Y_k + shift_k.
pub fn shift_mpoly<F: Ring>(m: &MPoly<F>, shift: &[F]) -> MPoly<F> {
    let nv = m.nvars();
    if nv == 0 || shift.iter().all(|s| s.is_zero()) {
        return m.clone();
    }
    let z = m.coeff_zero();
    let images: Vec<MPoly<F>> =
        (0..nv).map(|k| MPoly::var(k, nv, z).add(&MPoly::constant(shift[k].clone(), nv))).collect();
    m.substitute(&images)
}

impl GeometricResolution {
    /// deg_T q.
    pub fn degree(&self) -> usize {
        self.q.degree().max(0) as usize
    }

    /// Largest total degree among ρ and the coefficients of the v_j.
    pub fn max_total_degree(&self) -> i64 {
        self.v
            .iter()
            .flat_map(|v| v.coeffs().iter().map(MPoly::total_degree))
            .chain(std::iter::once(self.rho.total_degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn num_dependent(&self) -> usize {
        self.n - self.r
    }

    /// Resolution of the empty variety.
    pub fn empty(p: u64, n: usize, change: Matrix<Fp>, mode: Mode) -> Self {
        let z = MPoly::zero(0, &Fp::zero(p));
        let one = z.one_like();
        GeometricResolution {
            p,
            n,
            r: 0,
            change,
            lambda: vec![Fp::zero(p); n],
            q: UPoly::constant(one.clone()),
            rho: one.clone(),
            v: vec![UPoly::zero(&z); n],
            v_den: one,
            mode,
        }
    }

    pub fn inverse_change(&self) -> Result<Matrix<Fp>> {
        self.change.inverse().ok_or_else(|| Error::Invalid("variable change is singular".into()))
    }

    /// Fix the free variables; the result has r = 0 and no denominator.
    pub fn specialize(&self, point: &[Fp]) -> Result<Self> {
        if point.len() != self.r {
            return Err(Error::Arity { expected: self.r, got: point.len() });
        }
        let p = self.p;
        let zero = MPoly::zero(0, &Fp::zero(p));
        let konst = |c: Fp| MPoly::constant(c, 0);
        let rho_eta = self.rho.eval(point);
        if rho_eta.is_zero() {
            return Err(Error::Genericity("discriminant vanishes at the specialization point".into()));
        }
        let den_inv = self
            .v_den
            .eval(point)
            .inv()
            .ok_or_else(|| Error::Genericity("denominator vanishes at the specialization point".into()))?;
        let lift = |u: &UPoly<Fp>| u.map(&zero, |c| konst(*c));
        let q = lift(&specialize_upoly(&self.q, point, p));
        let mut v: Vec<UPoly<MPoly<Fp>>> = point.iter().map(|&e| UPoly::constant(konst(e))).collect();
        for vj in &self.v {
            v.push(lift(&specialize_upoly(vj, point, p).scale(&den_inv)));
        }
        let mut lambda = vec![Fp::zero(p); self.r];
        lambda.extend_from_slice(&self.lambda);
        let rho = discriminant(&q)?;
        Ok(GeometricResolution {
            p,
            n: self.n,
            r: 0,
            change: self.change.clone(),
            lambda,
            q,
            rho,
            v,
            v_den: zero.one_like(),
            mode: self.mode.clone(),
        })
    }

    /// Coordinates X_i as residues modulo q(η, T), for η off the denominator.
    fn fiber_coords(&self, point: &[Fp], pinv: &Matrix<Fp>) -> Option<(Arc<UPoly<Fp>>, Vec<QElem<Fp>>, Vec<QElem<Fp>>)> {
        let p = self.p;
        let den_inv = self.v_den.eval(point).inv()?;
        let m = Arc::new(specialize_upoly(&self.q, point, p));
        let mut y: Vec<QElem<Fp>> = point.iter().map(|&e| QElem::constant(e, &m)).collect();
        let mut deps = Vec::with_capacity(self.v.len());
        for vj in &self.v {
            let d = QElem::new(specialize_upoly(vj, point, p).scale(&den_inv), m.clone());
            deps.push(d.clone());
            y.push(d);
        }
        Some((m.clone(), x_from_y(pinv, &y), deps))
    }

    /// All points over the splitting field of q, in original coordinates.
    pub fn enumerate_points<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Result<(Arc<FieldContext>, Vec<Vec<FieldElement>>)> {
        if self.r != 0 {
            return Err(Error::Invalid("enumeration needs r = 0".into()));
        }
        let p = self.p;
        let q = specialize_upoly(&self.q, &[], p);
        let (ctx, roots) = find_roots(&q, rng)?;
        let pinv = self.inverse_change()?;
        let den_inv = self.v_den.eval(&[]).inv().ok_or(Error::ZeroDivisor)?;
        let vs: Vec<UPoly<Fp>> = self.v.iter().map(|v| specialize_upoly(v, &[], p).scale(&den_inv)).collect();
        let pts = roots
            .iter()
            .map(|t| {
                let y: Vec<FieldElement> = vs.iter().map(|v| v.eval_with(t, |c| ctx.from_base(*c))).collect();
                x_from_y(&pinv, &y)
            })
            .collect();
        Ok((ctx, pts))
    }

    /// Points with every coordinate in 𝔽_p, sorted.
    pub fn rational_points<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Result<Vec<Vec<Fp>>> {
        let (_, pts) = self.enumerate_points(rng)?;
        let mut out: Vec<Vec<Fp>> =
            pts.iter().filter_map(|pt| pt.iter().map(|x| x.to_base()).collect::<Option<Vec<Fp>>>()).collect();
        out.sort_by_key(|pt| pt.iter().map(|x| x.value()).collect::<Vec<_>>());
        out.dedup();
        Ok(out)
    }

    /// Check every structural invariant and membership of the variety in V(system).
    pub fn validate(&self, system: &Circuit) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let delta = self.degree();
        rep.push("arity", system.num_inputs() == self.n && self.v.len() == self.n - self.r, || {
            format!("n = {}, system inputs = {}, v count = {}", self.n, system.num_inputs(), self.v.len())
        });
        rep.push("lambda_length", self.lambda.len() == self.n - self.r, || format!("{} coefficients", self.lambda.len()));
        let pinv = self.change.inverse();
        rep.push("change_invertible", pinv.is_some(), || "singular variable change".into());
        rep.push("monic", self.q.is_monic(), || format!("leading coefficient {:?}", self.q.lead()));
        if !rep.ok() {
            return rep;
        }
        let pinv = pinv.unwrap();
        let disc = discriminant(&self.q);
        let sep = disc.as_ref().is_ok_and(|d| !d.is_zero());
        rep.push("separable", sep, || "discriminant of q is zero".into());
        if self.v_den == self.rho {
            let same = disc.as_ref().is_ok_and(|d| *d == self.rho);
            rep.push("rho_is_discriminant", same, || format!("ρ = {:?}, disc(q) = {:?}", self.rho, disc));
        } else {
            rep.push("denominator_unit", self.v_den.is_constant() && !self.v_den.is_zero(), || {
                format!("denominator {:?} differs from ρ", self.v_den)
            });
        }
        let vdeg = self.v.iter().all(|v| v.degree() < delta as isize || (delta == 0 && v.is_zero()));
        rep.push("v_degree", vdeg, || "some deg_T v_j ≥ deg_T q".into());
        let bound = 2 * (delta as i64).pow(3);
        let worst = self.max_total_degree();
        rep.push("degree_bound", worst <= bound.max(0), || format!("total degree {worst} exceeds {bound}"));
        if !sep || delta == 0 {
            return rep;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed0ff1be5);
        let samples = if self.r == 0 { 1 } else { 20 };
        let mut done = 0;
        let mut tries = 0;
        let (mut member, mut prim, mut avoid) = (Ok(()), Ok(()), Ok(()));
        let mut avoid_seen = false;
        while done < samples && tries < 50 * samples {
            tries += 1;
            let point: Vec<Fp> = (0..self.r).map(|_| Fp::random(self.p, &mut rng)).collect();
            if self.rho.eval(&point).is_zero() {
                continue;
            }
            let Some((m, x, deps)) = self.fiber_coords(&point, &pinv) else { continue };
            done += 1;
            if member.is_ok() {
                member = match system.evaluate(&x, &QElem::constant(Fp::zero(self.p), &m)) {
                    Ok(vals) => match vals.iter().position(|v| !v.is_zero()) {
                        None => Ok(()),
                        Some(k) => Err(format!("equation {k} is {:?} mod q at {point:?}", vals[k].poly())),
                    },
                    Err(e) => Err(format!("evaluation failed at {point:?}: {e}")),
                };
            }
            if prim.is_ok() {
                let mut u = QElem::constant(Fp::zero(self.p), &m);
                for (l, d) in self.lambda.iter().zip(&deps) {
                    u = u.add(&d.mul(&u.from_base(*l)));
                }
                if u != QElem::generator(&m) {
                    prim = Err(format!("Σλ_j v_j/den = {:?} at {point:?}", u.poly()));
                }
            }
            // a component inside the avoided set makes every unramified fiber
            // fail, so one passing fiber suffices
            if !avoid_seen {
                let here = match &self.mode {
                    Mode::Affine => Ok(()),
                    Mode::Toric => match x.iter().position(|xi| xi.inv().is_none()) {
                        None => Ok(()),
                        Some(i) => Err(format!("coordinate {i} vanishes on a component at {point:?}")),
                    },
                    Mode::Avoid(g) => match g.evaluate(&x, &QElem::constant(Fp::zero(self.p), &m)) {
                        Ok(vals) if vals.iter().all(|v| v.inv().is_some()) => Ok(()),
                        _ => Err(format!("avoided hypersurface contains a component at {point:?}")),
                    },
                };
                avoid_seen = here.is_ok();
                if avoid.is_ok() || avoid_seen {
                    avoid = here;
                }
            }
        }
        rep.push("specializations", done == samples, || format!("only {done} good points in {tries} tries"));
        let wit = |r: &std::result::Result<(), String>| r.clone().err().unwrap_or_default();
        rep.push("membership", member.is_ok(), || wit(&member));
        rep.push("primitive_element", prim.is_ok(), || wit(&prim));
        if self.mode != Mode::Affine {
            rep.push("avoidance", avoid.is_ok(), || wit(&avoid));
        }
        rep
    }
}
