use std::collections::HashMap;

use super::{Circuit, Gate};
use crate::field::Fp;
use crate::ring::Ring;

/// Incremental circuit construction with constant folding.
///
/// Any gate whose operands are all constant is folded into a `Const` gate,
/// so constant-ness is always syntactic and multiplications by constants
/// become free `Scale` gates.
pub struct Builder {
    p: u64,
    n: usize,
    gates: Vec<Gate>,
    konst: Vec<Option<Fp>>,
    inputs: Vec<Option<usize>>,
    consts: HashMap<u64, usize>,
}

impl Builder {
    pub fn new(p: u64, n: usize) -> Self {
        Builder { p, n, gates: Vec::new(), konst: Vec::new(), inputs: vec![None; n], consts: HashMap::new() }
    }

    fn push(&mut self, g: Gate, k: Option<Fp>) -> usize {
        self.gates.push(g);
        self.konst.push(k);
        self.gates.len() - 1
    }

    pub fn input(&mut self, i: usize) -> usize {
        if let Some(g) = self.inputs[i] {
            return g;
        }
        let g = self.push(Gate::Input(i), None);
        self.inputs[i] = Some(g);
        g
    }

    pub fn constant(&mut self, c: Fp) -> usize {
        if let Some(&g) = self.consts.get(&c.value()) {
            return g;
        }
        let g = self.push(Gate::Const(c), Some(c));
        self.consts.insert(c.value(), g);
        g
    }

    pub fn int(&mut self, v: i64) -> usize {
        self.constant(Fp::new(v, self.p))
    }

    /// Constant value of a gate, if it is constant.
    pub fn value(&self, g: usize) -> Option<Fp> {
        self.konst[g]
    }

    pub fn is_const(&self, g: usize) -> bool {
        self.konst[g].is_some()
    }

    pub fn add(&mut self, a: usize, b: usize) -> usize {
        match (self.konst[a], self.konst[b]) {
            (Some(x), Some(y)) => self.constant(x.add(&y)),
            (Some(x), None) if x.is_zero() => b,
            (None, Some(y)) if y.is_zero() => a,
            _ => self.push(Gate::Add(a, b), None),
        }
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        match (self.konst[a], self.konst[b]) {
            (Some(x), Some(y)) => self.constant(x.sub(&y)),
            (None, Some(y)) if y.is_zero() => a,
            (Some(x), None) if x.is_zero() => self.scale(Fp::new(-1, self.p), b),
            _ => self.push(Gate::Sub(a, b), None),
        }
    }

    pub fn mul(&mut self, a: usize, b: usize) -> usize {
        match (self.konst[a], self.konst[b]) {
            (Some(x), Some(y)) => self.constant(x.mul(&y)),
            (Some(x), None) => self.scale(x, b),
            (None, Some(y)) => self.scale(y, a),
            _ => self.push(Gate::Mul(a, b), None),
        }
    }

    pub fn div(&mut self, a: usize, b: usize) -> usize {
        match (self.konst[a], self.konst[b]) {
            (Some(x), Some(y)) if !y.is_zero() => self.constant(x.mul(&y.inv().unwrap())),
            (_, Some(y)) if !y.is_zero() => self.scale(y.inv().unwrap(), a),
            _ => self.push(Gate::Div(a, b), None),
        }
    }

    pub fn scale(&mut self, c: Fp, a: usize) -> usize {
        if c.is_zero() {
            return self.constant(c);
        }
        if c.is_one() {
            return a;
        }
        match self.konst[a] {
            Some(x) => self.constant(c.mul(&x)),
            None => self.push(Gate::Scale(c, a), None),
        }
    }

    pub fn neg(&mut self, a: usize) -> usize {
        self.scale(Fp::new(-1, self.p), a)
    }

    /// Sum where `None` stands for zero.
    pub fn add_opt(&mut self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(self.add(x, y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Linear combination Σ c_i·g_i; `None` when empty.
    pub fn linear(&mut self, terms: &[(Fp, usize)]) -> Option<usize> {
        let mut acc = None;
        for &(c, g) in terms {
            let t = self.scale(c, g);
            acc = self.add_opt(acc, Some(t));
        }
        acc
    }

    /// Re-emit a gate with operands renamed through `map`.
    pub fn copy_gate(&mut self, g: &Gate, map: &[usize]) -> usize {
        match *g {
            Gate::Input(i) => self.input(i),
            Gate::Const(c) => self.constant(c),
            Gate::Add(a, b) => self.add(map[a], map[b]),
            Gate::Sub(a, b) => self.sub(map[a], map[b]),
            Gate::Mul(a, b) => self.mul(map[a], map[b]),
            Gate::Div(a, b) => self.div(map[a], map[b]),
            Gate::Scale(c, a) => self.scale(c, map[a]),
        }
    }

    pub fn finish(self, outputs: Vec<usize>) -> Circuit {
        Circuit { p: self.p, n: self.n, gates: self.gates, outputs }
    }
}
