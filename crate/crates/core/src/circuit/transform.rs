//! Rewrites of circuits: homogenization, reverse-mode gradients, division
//! elimination, linear changes of variables and random linear combinations.

use super::{Builder, Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::matrix::Matrix;
use crate::ring::Ring;

/// Homogeneous components (index = degree) of every gate, truncated at `top`.
/// Component 0 is always a constant gate; `None` stands for zero.
type Components = Vec<Vec<Option<usize>>>;

fn conv(b: &mut Builder, x: &[Option<usize>], y: &[Option<usize>], top: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; top + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = None;
        for i in 0..=k {
            if let (Some(u), Some(v)) = (x[i], y[k - i]) {
                let t = b.mul(u, v);
                acc = b.add_opt(acc, Some(t));
            }
        }
        *slot = acc;
    }
    out
}

fn zip_with(
    b: &mut Builder,
    x: &[Option<usize>],
    y: &[Option<usize>],
    sub: bool,
) -> Vec<Option<usize>> {
    x.iter()
        .zip(y)
        .map(|(&u, &v)| match (u, v) {
            (Some(u), Some(v)) => Some(if sub { b.sub(u, v) } else { b.add(u, v) }),
            (u, None) => u,
            (None, Some(v)) => Some(if sub { b.neg(v) } else { v }),
        })
        .collect()
}

/// Series quotient x / y truncated at `top`; y's constant component must be a nonzero constant.
fn series_div(
    b: &mut Builder,
    x: &[Option<usize>],
    y: &[Option<usize>],
    top: usize,
    gate: usize,
) -> Result<Vec<Option<usize>>> {
    let y0 = y[0].and_then(|g| b.value(g)).filter(|v| !v.is_zero()).ok_or(Error::DivisionByZero(gate))?;
    let inv = y0.inv().ok_or(Error::DivisionByZero(gate))?;
    let mut q: Vec<Option<usize>> = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut acc = x[k];
        for j in 1..=k {
            if let (Some(u), Some(v)) = (y[j], q[k - j]) {
                let t = b.mul(u, v);
                acc = Some(match acc {
                    Some(a) => b.sub(a, t),
                    None => b.neg(t),
                });
            }
        }
        q.push(acc.map(|a| b.scale(inv, a)));
    }
    Ok(q)
}

fn propagate(c: &Circuit, b: &mut Builder, top: usize, input: impl Fn(&mut Builder, usize) -> Vec<Option<usize>>) -> Result<Components> {
    let live = c.live_gates();
    let mut comp: Components = Vec::with_capacity(c.gates.len());
    for (i, g) in c.gates.iter().enumerate() {
        if !live[i] {
            comp.push(Vec::new());
            continue;
        }
        let v = match *g {
            Gate::Input(k) => input(b, k),
            Gate::Const(x) => {
                let mut v = vec![None; top + 1];
                v[0] = Some(b.constant(x));
                v
            }
            Gate::Add(x, y) => zip_with(b, &comp[x], &comp[y], false),
            Gate::Sub(x, y) => zip_with(b, &comp[x], &comp[y], true),
            Gate::Mul(x, y) => conv(b, &comp[x], &comp[y], top),
            Gate::Div(x, y) => series_div(b, &comp[x], &comp[y], top, i)?,
            Gate::Scale(s, x) => comp[x].iter().map(|u| u.map(|u| b.scale(s, u))).collect(),
        };
        comp.push(v);
    }
    Ok(comp)
}

/// Homogenize each output with respect to a new variable X₀ (input 0).
///
/// Output j becomes X₀^{D_j}·f_j(X/X₀). Divisions are allowed only by
/// constants. A bound below the true degree is reported as `DegreeBound`.
pub fn homogenize(c: &Circuit, degrees: &[u32]) -> Result<Circuit> {
    if degrees.len() != c.num_outputs() {
        return Err(Error::Arity { expected: c.num_outputs(), got: degrees.len() });
    }
    let konst = c.constant_gates();
    let live = c.live_gates();
    for (i, g) in c.gates.iter().enumerate() {
        if let Gate::Div(_, y) = *g {
            if live[i] && !konst[y] {
                return Err(Error::Invalid(format!("gate {i} divides by a nonconstant")));
            }
        }
    }
    let syn = c.syntactic_degrees();
    for (j, (&o, &d)) in c.outputs.iter().zip(degrees).enumerate() {
        if syn[o].is_none_or(|s| s > d) {
            let dense = c.select_outputs(&[j]).dense_expand()?;
            if dense[0].total_degree() > d as i64 {
                return Err(Error::DegreeBound { output: j, bound: d });
            }
        }
    }
    let top = degrees.iter().copied().max().unwrap_or(0) as usize;
    let mut b = Builder::new(c.p, c.n + 1);
    let comp = propagate(c, &mut b, top, |b, k| {
        let mut v = vec![None; top + 1];
        v[0] = Some(b.int(0));
        if top >= 1 {
            v[1] = Some(b.input(k + 1));
        }
        v
    })?;
    let mut pw: Vec<Option<usize>> = vec![None; top + 1];
    let mut outs = Vec::with_capacity(c.outputs.len());
    for (&o, &d) in c.outputs.iter().zip(degrees) {
        let d = d as usize;
        let mut acc = None;
        for k in 0..=d {
            let Some(f) = comp[o][k] else { continue };
            let t = if k == d {
                f
            } else {
                let x = x0_power(&mut b, &mut pw, d - k);
                b.mul(f, x)
            };
            acc = b.add_opt(acc, Some(t));
        }
        outs.push(acc.unwrap_or_else(|| b.int(0)));
    }
    Ok(b.finish(outs))
}

fn x0_power(b: &mut Builder, pw: &mut Vec<Option<usize>>, k: usize) -> usize {
    if let Some(g) = pw[k] {
        return g;
    }
    let g = if k == 1 {
        b.input(0)
    } else {
        let lo = x0_power(b, pw, k / 2);
        let hi = x0_power(b, pw, k - k / 2);
        b.mul(lo, hi)
    };
    pw[k] = Some(g);
    g
}

/// Reverse-mode gradient of a single-output circuit.
///
/// The result has one output per input variable.
pub fn gradient(c: &Circuit) -> Result<Circuit> {
    if c.num_outputs() != 1 {
        return Err(Error::NotSingleOutput(c.num_outputs()));
    }
    let live = c.live_gates();
    let konst = c.constant_gates();
    let mut b = Builder::new(c.p, c.n);
    let mut map = vec![usize::MAX; c.gates.len()];
    for (i, g) in c.gates.iter().enumerate() {
        if live[i] {
            map[i] = b.copy_gate(g, &map);
        }
    }
    let mut adj: Vec<Option<usize>> = vec![None; c.gates.len()];
    let mut grad: Vec<Option<usize>> = vec![None; c.n];
    let out = c.outputs[0];
    if !konst[out] {
        adj[out] = Some(b.int(1));
    }
    let acc = |b: &mut Builder, slot: &mut Option<usize>, v: usize, minus: bool| {
        *slot = Some(match (*slot, minus) {
            (None, false) => v,
            (None, true) => b.neg(v),
            (Some(s), false) => b.add(s, v),
            (Some(s), true) => b.sub(s, v),
        });
    };
    for i in (0..c.gates.len()).rev() {
        let Some(a) = adj[i] else { continue };
        if konst[i] {
            continue;
        }
        match c.gates[i] {
            Gate::Input(k) => acc(&mut b, &mut grad[k], a, false),
            Gate::Const(_) => {}
            Gate::Add(x, y) | Gate::Sub(x, y) => {
                let minus = matches!(c.gates[i], Gate::Sub(..));
                if !konst[x] {
                    acc(&mut b, &mut adj[x], a, false);
                }
                if !konst[y] {
                    acc(&mut b, &mut adj[y], a, minus);
                }
            }
            Gate::Mul(x, y) => {
                if !konst[x] {
                    let t = b.mul(a, map[y]);
                    acc(&mut b, &mut adj[x], t, false);
                }
                if !konst[y] {
                    let t = b.mul(a, map[x]);
                    acc(&mut b, &mut adj[y], t, false);
                }
            }
            Gate::Div(x, y) => {
                let t = b.div(a, map[y]);
                if !konst[x] {
                    acc(&mut b, &mut adj[x], t, false);
                }
                if !konst[y] {
                    let u = b.mul(t, map[i]);
                    acc(&mut b, &mut adj[y], u, true);
                }
            }
            Gate::Scale(s, x) => {
                let t = b.scale(s, a);
                acc(&mut b, &mut adj[x], t, false);
            }
        }
    }
    let outs = grad.into_iter().map(|g| g.unwrap_or_else(|| b.int(0))).collect();
    Ok(b.finish(outs).pruned())
}

/// Replace divisions by truncated power-series arithmetic around `center`.
///
/// Every gate is expanded into homogeneous components in X − center up to
/// `target_degree`; each output is then the sum of its components, which
/// equals the input polynomial when its degree is at most `target_degree`.
/// Division-free circuits are returned unchanged.
pub fn eliminate_divisions(c: &Circuit, center: &[Fp], target_degree: u32) -> Result<Circuit> {
    if center.len() != c.n {
        return Err(Error::Arity { expected: c.n, got: center.len() });
    }
    if !c.has_division() {
        return Ok(c.clone());
    }
    let top = target_degree as usize;
    let mut b = Builder::new(c.p, c.n);
    let comp = propagate(c, &mut b, top, |b, k| {
        let mut v = vec![None; top + 1];
        let z = b.constant(center[k]);
        v[0] = Some(z);
        if top >= 1 {
            let x = b.input(k);
            v[1] = Some(b.sub(x, z));
        }
        v
    })?;
    let mut outs = Vec::with_capacity(c.outputs.len());
    for &o in &c.outputs {
        let mut acc = None;
        for &g in &comp[o] {
            acc = b.add_opt(acc, g);
        }
        outs.push(acc.unwrap_or_else(|| b.int(0)));
    }
    Ok(b.finish(outs).pruned())
}

/// Substitute X = M·Y; the result has `m.cols()` inputs.
pub fn compose_linear(c: &Circuit, m: &Matrix<Fp>) -> Result<Circuit> {
    if m.rows() != c.n {
        return Err(Error::Arity { expected: c.n, got: m.rows() });
    }
    let mut b = Builder::new(c.p, m.cols());
    let mut map = vec![usize::MAX; c.gates.len()];
    let mut images: Vec<Option<usize>> = vec![None; c.n];
    for (i, g) in c.gates.iter().enumerate() {
        map[i] = match *g {
            Gate::Input(k) => match images[k] {
                Some(x) => x,
                None => {
                    let terms: Vec<(Fp, usize)> = (0..m.cols()).map(|j| (*m.get(k, j), b.input(j))).collect();
                    let x = b.linear(&terms).unwrap_or_else(|| b.int(0));
                    images[k] = Some(x);
                    x
                }
            },
            _ => b.copy_gate(g, &map),
        };
    }
    let outs = c.outputs.iter().map(|&o| map[o]).collect();
    Ok(b.finish(outs).pruned())
}

/// Replace the s outputs by `n` random linear combinations of them.
///
/// When s = n the identity combination is used and no randomness is drawn.
/// Returns the circuit and the n×s coefficient rows.
pub fn generic_combinations<G: rand::Rng + ?Sized>(c: &Circuit, n: usize, rng: &mut G) -> Result<(Circuit, Vec<Vec<Fp>>)> {
    let s = c.num_outputs();
    if s < n {
        return Err(Error::Invalid(format!("cannot form {n} combinations of {s} equations")));
    }
    let p = c.p;
    let coeffs: Vec<Vec<Fp>> = if s == n {
        (0..n).map(|i| (0..s).map(|j| Fp::new(i64::from(i == j), p)).collect()).collect()
    } else {
        (0..n).map(|_| (0..s).map(|_| Fp::random(p, rng)).collect()).collect()
    };
    if s == n {
        return Ok((c.clone(), coeffs));
    }
    let mut b = Builder::new(p, c.n);
    let mut map = vec![usize::MAX; c.gates.len()];
    for (i, g) in c.gates.iter().enumerate() {
        map[i] = b.copy_gate(g, &map);
    }
    let outs = coeffs
        .iter()
        .map(|row| {
            let terms: Vec<(Fp, usize)> = row.iter().zip(&c.outputs).map(|(&a, &o)| (a, map[o])).collect();
            b.linear(&terms).unwrap_or_else(|| b.int(0))
        })
        .collect();
    Ok((b.finish(outs).pruned(), coeffs))
}
