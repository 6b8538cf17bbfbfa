//! Straight-line programs over 𝔽_p with nonscalar cost accounting.

mod builder;
mod pit;
mod random;
pub mod text;
mod transform;

use serde::{Deserialize, Serialize};

pub use builder::Builder;
pub use pit::{omega_for_depth, pit_is_zero, sigma_for, CorrectTestSequence};
pub use random::{random_circuit, RandomSpec};
pub use transform::{compose_linear, eliminate_divisions, generic_combinations, gradient, homogenize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// One instruction; operands are indices of earlier gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Input(usize),
    Const(Fp),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Scale(Fp, usize),
}

/// Topologically ordered gate list with designated outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    p: u64,
    n: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

/// Nonscalar size L and depth ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostProfile {
    pub size: usize,
    pub depth: usize,
    pub gates: usize,
}

/// Largest coefficient table `dense_expand` will build.
pub const DENSE_LIMIT: usize = 1_000_000;

impl Circuit {
    /// Validates operand order and input indices.
    pub fn new(p: u64, n: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        for (i, g) in gates.iter().enumerate() {
            let ok = match *g {
                Gate::Input(k) => k < n,
                Gate::Const(c) => c.modulus() == p,
                Gate::Add(a, b) | Gate::Sub(a, b) | Gate::Mul(a, b) | Gate::Div(a, b) => a < i && b < i,
                Gate::Scale(c, a) => a < i && c.modulus() == p,
            };
            if !ok {
                return Err(Error::Invalid(format!("gate {i} is malformed")));
            }
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::Invalid(format!("output {o} is not a gate")));
        }
        Ok(Circuit { p, n, gates, outputs })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn num_inputs(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn has_division(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Div(..)))
    }

    /// Same gates, different output list.
    pub fn with_outputs(&self, outputs: Vec<usize>) -> Self {
        Circuit { p: self.p, n: self.n, gates: self.gates.clone(), outputs }
    }

    /// Keep only the listed outputs, in the given order.
    pub fn select_outputs(&self, which: &[usize]) -> Self {
        self.with_outputs(which.iter().map(|&i| self.outputs[i]).collect())
    }

    /// Drop gates that no output depends on.
    pub fn pruned(&self) -> Self {
        let live = self.live_gates();
        let mut b = Builder::new(self.p, self.n);
        let mut map = vec![usize::MAX; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            if live[i] {
                map[i] = b.copy_gate(g, &map);
            }
        }
        let outs = self.outputs.iter().map(|&o| map[o]).collect();
        b.finish(outs)
    }

    pub(crate) fn live_gates(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        for &o in &self.outputs {
            live[o] = true;
        }
        for i in (0..self.gates.len()).rev() {
            if !live[i] {
                continue;
            }
            match self.gates[i] {
                Gate::Add(a, b) | Gate::Sub(a, b) | Gate::Mul(a, b) | Gate::Div(a, b) => {
                    live[a] = true;
                    live[b] = true;
                }
                Gate::Scale(_, a) => live[a] = true,
                _ => {}
            }
        }
        live
    }

    /// Which gates compute constants (depend on no input).
    pub fn constant_gates(&self) -> Vec<bool> {
        let mut k = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(_) => false,
                Gate::Const(_) => true,
                Gate::Add(a, b) | Gate::Sub(a, b) | Gate::Mul(a, b) | Gate::Div(a, b) => k[a] && k[b],
                Gate::Scale(_, a) => k[a],
            };
            k.push(v);
        }
        k
    }

    /// Gate-by-gate evaluation in any ring; `like` supplies the ring context for constants.
    pub fn evaluate<R: Ring>(&self, point: &[R], like: &R) -> Result<Vec<R>> {
        if point.len() != self.n {
            return Err(Error::Arity { expected: self.n, got: point.len() });
        }
        let mut vals: Vec<R> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let v = match *g {
                Gate::Input(k) => point[k].clone(),
                Gate::Const(c) => like.from_base(c),
                Gate::Add(a, b) => vals[a].add(&vals[b]),
                Gate::Sub(a, b) => vals[a].sub(&vals[b]),
                Gate::Mul(a, b) => vals[a].mul(&vals[b]),
                Gate::Div(a, b) => vals[a].mul(&vals[b].inv().ok_or(Error::DivisionByZero(i))?),
                Gate::Scale(c, a) => vals[a].mul(&like.from_base(c)),
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&o| vals[o].clone()).collect())
    }

    /// Evaluate at a point of 𝔽_p^n.
    pub fn eval_fp(&self, point: &[Fp]) -> Result<Vec<Fp>> {
        self.evaluate(point, &Fp::zero(self.p))
    }

    /// Nonscalar size and depth.
    ///
    /// A multiplication counts when both operands are nonconstant, a division
    /// when its denominator is nonconstant; linear gates are free.
    pub fn measure(&self) -> CostProfile {
        let k = self.constant_gates();
        let mut depth = vec![0usize; self.gates.len()];
        let mut size = 0;
        for (i, g) in self.gates.iter().enumerate() {
            let (d, cost) = match *g {
                Gate::Input(_) | Gate::Const(_) => (0, 0),
                Gate::Add(a, b) | Gate::Sub(a, b) => (depth[a].max(depth[b]), 0),
                Gate::Mul(a, b) => (depth[a].max(depth[b]), usize::from(!k[a] && !k[b])),
                Gate::Div(a, b) => (depth[a].max(depth[b]), usize::from(!k[b])),
                Gate::Scale(_, a) => (depth[a], 0),
            };
            depth[i] = d + cost;
            size += cost;
        }
        CostProfile { size, depth: depth.into_iter().max().unwrap_or(0), gates: self.gates.len() }
    }

    /// Upper bound on each gate's degree (None where a nonconstant division occurs).
    pub fn syntactic_degrees(&self) -> Vec<Option<u32>> {
        let k = self.constant_gates();
        let mut d: Vec<Option<u32>> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(_) => Some(1),
                Gate::Const(_) => Some(0),
                Gate::Add(a, b) | Gate::Sub(a, b) => d[a].zip(d[b]).map(|(x, y)| x.max(y)),
                Gate::Mul(a, b) => d[a].zip(d[b]).map(|(x, y)| x + y),
                Gate::Div(a, b) => {
                    if k[b] {
                        d[a]
                    } else {
                        None
                    }
                }
                Gate::Scale(_, a) => d[a],
            };
            d.push(v);
        }
        d
    }

    /// Coefficient tables of the outputs; divisions must be by constants.
    pub fn dense_expand(&self) -> Result<Vec<MPoly<Fp>>> {
        let zero = Fp::zero(self.p);
        let mut vals: Vec<MPoly<Fp>> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let v = match *g {
                Gate::Input(k) => MPoly::var(k, self.n, &zero),
                Gate::Const(c) => MPoly::constant(c, self.n),
                Gate::Add(a, b) => vals[a].add(&vals[b]),
                Gate::Sub(a, b) => vals[a].sub(&vals[b]),
                Gate::Mul(a, b) => {
                    if vals[a].num_terms().saturating_mul(vals[b].num_terms()) > 64 * DENSE_LIMIT {
                        return Err(Error::TooLarge(DENSE_LIMIT));
                    }
                    vals[a].mul(&vals[b])
                }
                Gate::Div(a, b) => {
                    let inv = vals[b].inv().ok_or_else(|| {
                        if vals[b].is_zero() {
                            Error::DivisionByZero(i)
                        } else {
                            Error::Invalid(format!("gate {i} divides by a nonconstant"))
                        }
                    })?;
                    vals[a].mul(&inv)
                }
                Gate::Scale(c, a) => vals[a].scale(&c),
            };
            if v.num_terms() > DENSE_LIMIT {
                return Err(Error::TooLarge(DENSE_LIMIT));
            }
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&o| vals[o].clone()).collect())
    }

    /// Circuit computing the given polynomials, sharing variable powers.
    pub fn from_polys(p: u64, n: usize, polys: &[MPoly<Fp>]) -> Self {
        let mut b = Builder::new(p, n);
        let mut powers: Vec<Vec<usize>> = (0..n).map(|i| vec![b.constant(Fp::one(p)), b.input(i)]).collect();
        let mut outs = Vec::new();
        for f in polys {
            let mut acc: Option<usize> = None;
            for (e, c) in f.terms() {
                let mut t: Option<usize> = None;
                for (i, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    while powers[i].len() <= k as usize {
                        let last = *powers[i].last().unwrap();
                        let x = powers[i][1];
                        let nx = b.mul(last, x);
                        powers[i].push(nx);
                    }
                    let pw = powers[i][k as usize];
                    t = Some(match t {
                        None => pw,
                        Some(t) => b.mul(t, pw),
                    });
                }
                let term = match t {
                    None => b.constant(*c),
                    Some(t) => b.scale(*c, t),
                };
                acc = Some(match acc {
                    None => term,
                    Some(a) => b.add(a, term),
                });
            }
            let out = acc.unwrap_or_else(|| b.constant(Fp::zero(p)));
            outs.push(out);
        }
        b.finish(outs)
    }
}
