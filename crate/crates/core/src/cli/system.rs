//! System files in either the sparse or the gate-list grammar.
//!
//! Sparse form, one equation per `eq` line:
//!
//! ```text
//! field 23
//! vars x1 x2
//! eq x1^2 - 2
//! eq 3*x1*x2 + x2^3 - 1
//! avoid x1 - x2
//! ```
//!
//! A file whose first keyword is `inputs` (after an optional `field` line)
//! is read with [`parse_slp`](crate::circuit::text::parse_slp).

use crate::circuit::text::{parse_int, parse_modulus, parse_slp, tokens};
use crate::circuit::{Circuit, CostProfile};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// Field used when a file has no `field` line.
pub const DEFAULT_FIELD: u64 = 10007;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Sparse,
    Slp,
}

/// A parsed system.
#[derive(Clone, Debug)]
pub struct SystemFile {
    pub format: Format,
    pub circuit: Circuit,
    pub vars: Vec<String>,
    /// Per-equation degree bounds, when known.
    pub degrees: Option<Vec<u32>>,
    /// Single-output circuit from an `avoid` line.
    pub avoid: Option<Circuit>,
    /// Dense equations (sparse form only).
    pub polys: Option<Vec<MPoly<Fp>>>,
}

impl SystemFile {
    pub fn p(&self) -> u64 {
        self.circuit.modulus()
    }

    pub fn n(&self) -> usize {
        self.circuit.num_inputs()
    }

    pub fn s(&self) -> usize {
        self.circuit.num_outputs()
    }

    /// Largest equation degree, when known.
    pub fn d(&self) -> Option<u32> {
        self.degrees.as_ref().map(|d| d.iter().copied().max().unwrap_or(0))
    }

    pub fn cost(&self) -> CostProfile {
        self.circuit.measure()
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

/// Parse a system file, choosing the grammar from its keywords.
pub fn parse_system(text: &str) -> Result<SystemFile> {
    let first = text
        .lines()
        .filter_map(|l| tokens(l).first().map(|&(_, t)| t))
        .find(|&t| t != "field");
    if first == Some("inputs") {
        let f = parse_slp(text, DEFAULT_FIELD)?;
        let degrees = match f.degrees {
            Some(d) => Some(d),
            None if !f.circuit.has_division() => {
                let d: Option<Vec<u32>> = f.circuit.syntactic_degrees().into_iter().collect();
                d
            }
            None => None,
        };
        let avoid = f.avoid.map(|g| f.circuit.with_outputs(vec![g]).pruned());
        return Ok(SystemFile { format: Format::Slp, circuit: f.circuit, vars: f.inputs, degrees, avoid, polys: None });
    }
    parse_sparse(text)
}

fn parse_sparse(text: &str) -> Result<SystemFile> {
    let mut p: Option<u64> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut eqs = Vec::new();
    let mut avoid = None;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        match head {
            "field" => {
                if p.is_some() || vars.is_some() {
                    return Err(syntax(ln, col, "`field` must come first and only once"));
                }
                let &(c, t) = toks.get(1).ok_or_else(|| syntax(ln, col, "missing modulus"))?;
                if toks.len() > 2 {
                    return Err(syntax(ln, toks[2].0, "unexpected token"));
                }
                p = Some(parse_modulus(t, ln, c)?);
            }
            "vars" => {
                if vars.is_some() {
                    return Err(syntax(ln, col, "duplicate `vars` line"));
                }
                let mut v: Vec<String> = Vec::new();
                for &(c, t) in &toks[1..] {
                    if !is_ident(t) || v.iter().any(|x| x == t) || is_keyword(t) {
                        return Err(syntax(ln, c, format!("bad or repeated variable `{t}`")));
                    }
                    v.push(t.to_string());
                }
                if v.is_empty() {
                    return Err(syntax(ln, col, "no variables declared"));
                }
                vars = Some(v);
            }
            "eq" | "avoid" => {
                let names = vars.as_ref().ok_or_else(|| syntax(ln, col, "`vars` line must precede equations"))?;
                let modulus = p.unwrap_or(DEFAULT_FIELD);
                let body_start = col - 1 + head.len();
                let body = raw.split('#').next().unwrap_or("");
                let poly = ExprParser::new(&body[body_start..], ln, body_start + 1, names, modulus).parse()?;
                if head == "eq" {
                    eqs.push(poly);
                } else if avoid.replace(poly).is_some() {
                    return Err(syntax(ln, col, "only one `avoid` line"));
                }
            }
            _ => return Err(syntax(ln, col, format!("unknown keyword `{head}`"))),
        }
    }
    let vars = vars.ok_or_else(|| syntax(1, 1, "missing `vars` line"))?;
    let p = p.unwrap_or(DEFAULT_FIELD);
    let n = vars.len();
    let circuit = Circuit::from_polys(p, n, &eqs);
    let degrees = Some(eqs.iter().map(|f| f.total_degree().max(0) as u32).collect());
    let avoid = avoid.map(|g| Circuit::from_polys(p, n, &[g]));
    Ok(SystemFile { format: Format::Sparse, circuit, vars, degrees, avoid, polys: Some(eqs) })
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "field" | "vars" | "eq" | "avoid" | "inputs" | "out" | "degrees")
}

fn is_ident(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_alphabetic() || c == '_') && it.all(|c| c.is_alphanumeric() || c == '_')
}

/// Recursive descent over `expr := [±] term {± term}`, `term := factor {* factor}`,
/// `factor := int | var [^ int] | ( expr ) [^ int]`.
struct ExprParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    col0: usize,
    vars: &'a [String],
    p: u64,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str, line: usize, col0: usize, vars: &'a [String], p: u64) -> Self {
        let chars = src.char_indices().collect();
        ExprParser { chars, pos: 0, line, col0, vars, p }
    }

    fn col(&self) -> usize {
        // columns count characters, not bytes
        self.col0 + self.pos
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax(self.line, self.col(), msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn zero(&self) -> MPoly<Fp> {
        MPoly::zero(self.vars.len(), &Fp::zero(self.p))
    }

    fn parse(mut self) -> Result<MPoly<Fp>> {
        if self.peek().is_none() {
            return Err(self.err("empty expression"));
        }
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<MPoly<Fp>> {
        let mut acc = self.zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MPoly<Fp>> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let col = self.col();
        let digits = self.number()?;
        digits.parse::<u32>().ok().filter(|&k| k <= 1 << 16).ok_or_else(|| syntax(self.line, col, "exponent too large"))
    }

    fn factor(&mut self) -> Result<MPoly<Fp>> {
        let n = self.vars.len();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.number()?;
                let v = parse_int(&digits, self.p).ok_or_else(|| self.err("bad integer"))?;
                let base = MPoly::constant(v, n);
                let k = self.exponent()?;
                Ok(base.pow(u64::from(k)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                let k = self.exponent()?;
                Ok(inner.pow(u64::from(k)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let col = self.col();
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].1.is_alphanumeric() || self.chars[self.pos].1 == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| syntax(self.line, col, format!("undeclared variable `{name}`")))?;
                let k = self.exponent()?;
                Ok(MPoly::var(i, n, &Fp::zero(self.p)).pow(u64::from(k)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Render dense equations in the sparse grammar.
pub fn print_sparse(p: u64, vars: &[String], eqs: &[MPoly<Fp>]) -> String {
    let mut s = format!("field {p}\nvars {}\n", vars.join(" "));
    for f in eqs {
        s.push_str(&format!("eq {}\n", render_poly(f, vars)));
    }
    s
}

fn render_poly(f: &MPoly<Fp>, vars: &[String]) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in f.terms().collect::<Vec<_>>().into_iter().rev() {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { vars[i].clone() } else { format!("{}^{k}", vars[i]) })
            .collect();
        let term = match (c.value(), mono.is_empty()) {
            (v, true) => v.to_string(),
            (1, false) => mono.join("*"),
            (v, false) => format!("{v}*{}", mono.join("*")),
        };
        if !out.is_empty() {
            out.push_str(" + ");
        }
        out.push_str(&term);
    }
    out
}
