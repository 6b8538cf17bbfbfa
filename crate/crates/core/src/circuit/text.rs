//! Line-oriented text form of circuits.
//!
//! ```text
//! field 23
//! inputs x y
//! g1 = mul x y
//! g2 = add g1 5
//! out g2
//! degrees 2
//! ```
//!
//! Operations are `add`, `sub`, `mul`, `div` (two arguments), `scale c a`
//! and `const c`. Arguments are earlier names or integer literals.
//! `#` starts a comment.

use std::collections::HashMap;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::{is_prime, Fp};

/// Parsed circuit file.
#[derive(Clone, Debug)]
pub struct SlpFile {
    pub circuit: Circuit,
    pub inputs: Vec<String>,
    pub degrees: Option<Vec<u32>>,
    /// Gate designated by an `avoid` line.
    pub avoid: Option<usize>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

/// Split a line into tokens with 1-based columns, dropping comments.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parse a field modulus, checking primality.
pub(crate) fn parse_modulus(tok: &str, line: usize, col: usize) -> Result<u64> {
    let p: u64 = tok.parse().map_err(|_| syntax(line, col, format!("bad modulus `{tok}`")))?;
    if p >= 1 << 62 {
        return Err(syntax(line, col, "modulus too large"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p)
}

/// Reduce a decimal integer literal modulo p.
pub(crate) fn parse_int(tok: &str, p: u64) -> Option<Fp> {
    let (neg, digits) = match tok.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, tok),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut v: u128 = 0;
    for b in digits.bytes() {
        v = (v * 10 + u128::from(b - b'0')) % p as u128;
    }
    let v = Fp::from_u64(v as u64, p);
    Some(if neg { Fp::new(-(v.value() as i64), p) } else { v })
}

fn is_ident(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_alphabetic() || c == '_') && it.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parse the gate-list grammar; `default_p` applies when no `field` line is given.
pub fn parse_slp(text: &str, default_p: u64) -> Result<SlpFile> {
    let mut p = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut input_gate: Vec<Option<usize>> = Vec::new();
    let mut outputs = Vec::new();
    let mut degrees = None;
    let mut avoid = None;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        let modulus = |p: &Option<u64>| p.unwrap_or(default_p);
        match head {
            "field" => {
                if p.is_some() || inputs.is_some() {
                    return Err(syntax(ln, col, "`field` must come first and only once"));
                }
                let &(c, t) = toks.get(1).ok_or_else(|| syntax(ln, col, "missing modulus"))?;
                p = Some(parse_modulus(t, ln, c)?);
            }
            "inputs" => {
                if inputs.is_some() {
                    return Err(syntax(ln, col, "duplicate `inputs` line"));
                }
                let mut v = Vec::new();
                for &(c, t) in &toks[1..] {
                    if !is_ident(t) || names.contains_key(t) {
                        return Err(syntax(ln, c, format!("bad or repeated input name `{t}`")));
                    }
                    names.insert(t.to_string(), usize::MAX - v.len());
                    v.push(t.to_string());
                }
                input_gate = vec![None; v.len()];
                inputs = Some(v);
            }
            "out" | "avoid" => {
                if toks.len() < 2 {
                    return Err(syntax(ln, col, "expected a gate name"));
                }
                for &(c, t) in &toks[1..] {
                    let g = resolve(t, ln, c, &names, &mut gates, &mut input_gate, modulus(&p))?;
                    if head == "out" {
                        outputs.push(g);
                    } else if avoid.replace(g).is_some() || toks.len() > 2 {
                        return Err(syntax(ln, c, "only one avoid gate"));
                    }
                }
            }
            "degrees" => {
                let mut v = Vec::new();
                for &(c, t) in &toks[1..] {
                    v.push(t.parse::<u32>().map_err(|_| syntax(ln, c, format!("bad degree `{t}`")))?);
                }
                degrees = Some(v);
            }
            _ => {
                if inputs.is_none() {
                    return Err(syntax(ln, col, "`inputs` line must precede gates"));
                }
                if !is_ident(head) || names.contains_key(head) {
                    return Err(syntax(ln, col, format!("bad or repeated gate name `{head}`")));
                }
                match toks.get(1) {
                    Some(&(_, "=")) => {}
                    Some(&(c, _)) => return Err(syntax(ln, c, "expected `=`")),
                    None => return Err(syntax(ln, col + head.len(), "expected `=`")),
                }
                let &(oc, op) = toks.get(2).ok_or_else(|| syntax(ln, col, "missing operation"))?;
                let args = &toks[3..];
                let pm = modulus(&p);
                let want = match op {
                    "const" => 1,
                    "add" | "sub" | "mul" | "div" | "scale" => 2,
                    _ => return Err(syntax(ln, oc, format!("unknown operation `{op}`"))),
                };
                if args.len() != want {
                    return Err(syntax(ln, oc, format!("`{op}` takes {want} arguments")));
                }
                let gate = match op {
                    "const" | "scale" => {
                        let (c, t) = args[0];
                        let v = parse_int(t, pm).ok_or_else(|| syntax(ln, c, format!("bad constant `{t}`")))?;
                        if op == "const" {
                            Gate::Const(v)
                        } else {
                            let (c1, t1) = args[1];
                            Gate::Scale(v, resolve(t1, ln, c1, &names, &mut gates, &mut input_gate, pm)?)
                        }
                    }
                    _ => {
                        let a = resolve(args[0].1, ln, args[0].0, &names, &mut gates, &mut input_gate, pm)?;
                        let b = resolve(args[1].1, ln, args[1].0, &names, &mut gates, &mut input_gate, pm)?;
                        match op {
                            "add" => Gate::Add(a, b),
                            "sub" => Gate::Sub(a, b),
                            "mul" => Gate::Mul(a, b),
                            _ => Gate::Div(a, b),
                        }
                    }
                };
                gates.push(gate);
                names.insert(head.to_string(), gates.len() - 1);
            }
        }
    }
    let inputs = inputs.ok_or_else(|| syntax(1, 1, "missing `inputs` line"))?;
    let p = p.unwrap_or(default_p);
    if let Some(d) = &degrees {
        if d.len() != outputs.len() {
            return Err(syntax(1, 1, format!("{} degrees for {} outputs", d.len(), outputs.len())));
        }
    }
    let circuit = Circuit::new(p, inputs.len(), gates, outputs)?;
    Ok(SlpFile { circuit, inputs, degrees, avoid })
}

fn resolve(
    t: &str,
    ln: usize,
    col: usize,
    names: &HashMap<String, usize>,
    gates: &mut Vec<Gate>,
    input_gate: &mut [Option<usize>],
    p: u64,
) -> Result<usize> {
    if let Some(v) = parse_int(t, p) {
        gates.push(Gate::Const(v));
        return Ok(gates.len() - 1);
    }
    let &g = names.get(t).ok_or_else(|| syntax(ln, col, format!("undeclared name `{t}`")))?;
    if g > usize::MAX - input_gate.len() {
        let k = usize::MAX - g;
        return Ok(*input_gate[k].get_or_insert_with(|| {
            gates.push(Gate::Input(k));
            gates.len() - 1
        }));
    }
    Ok(g)
}

/// Render a circuit in the gate-list grammar; `inputs` names the variables.
pub fn print_slp(c: &Circuit, inputs: &[String], degrees: Option<&[u32]>) -> String {
    let mut s = format!("field {}\ninputs {}\n", c.modulus(), inputs.join(" "));
    let mut names: Vec<String> = Vec::with_capacity(c.gates().len());
    // gate names must not shadow an input
    let mut prefix = String::from("g");
    while inputs.iter().any(|x| x.starts_with(prefix.as_str())) {
        prefix.push('_');
    }
    let mut next = 1;
    for g in c.gates() {
        let name = match *g {
            Gate::Input(k) => {
                names.push(inputs[k].clone());
                continue;
            }
            _ => format!("{prefix}{next}"),
        };
        next += 1;
        let rhs = match *g {
            Gate::Input(_) => unreachable!(),
            Gate::Const(v) => format!("const {v}"),
            Gate::Add(a, b) => format!("add {} {}", names[a], names[b]),
            Gate::Sub(a, b) => format!("sub {} {}", names[a], names[b]),
            Gate::Mul(a, b) => format!("mul {} {}", names[a], names[b]),
            Gate::Div(a, b) => format!("div {} {}", names[a], names[b]),
            Gate::Scale(v, a) => format!("scale {v} {}", names[a]),
        };
        s.push_str(&format!("{name} = {rhs}\n"));
        names.push(name);
    }
    let outs: Vec<&str> = c.outputs().iter().map(|&o| names[o].as_str()).collect();
    if !outs.is_empty() {
        s.push_str(&format!("out {}\n", outs.join(" ")));
    }
    if let Some(d) = degrees {
        let d: Vec<String> = d.iter().map(u32::to_string).collect();
        s.push_str(&format!("degrees {}\n", d.join(" ")));
    }
    s
}
