//! JSON encoding of resolutions and solver output.
//!
//! Field elements are decimal strings of their representative in [0, p).
//! Polynomials are ascending coefficient arrays; a coefficient over the free
//! variables is a string when r = 0 and a list of `[exponents, value]` terms
//! otherwise. Extension elements are arrays of base-field coordinates.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::circuit::text::{parse_slp, print_slp};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, Fp};
use crate::matrix::Matrix;
use crate::mpoly::MPoly;
use crate::poly::UPoly;
use crate::resolution::{GeometricResolution, Mode};
use crate::solver::Solution;

pub fn fp_json(x: Fp) -> Value {
    Value::String(x.value().to_string())
}

pub fn fps_json(v: &[Fp]) -> Value {
    Value::Array(v.iter().map(|&x| fp_json(x)).collect())
}

pub fn mpoly_json(m: &MPoly<Fp>) -> Value {
    if m.nvars() == 0 {
        return fp_json(m.constant_term());
    }
    Value::Array(m.terms().map(|(e, c)| json!([e, c.value().to_string()])).collect())
}

pub fn upoly_json(u: &UPoly<MPoly<Fp>>) -> Value {
    Value::Array(u.coeffs().iter().map(mpoly_json).collect())
}

pub fn upoly_fp_json(u: &UPoly<Fp>) -> Value {
    fps_json(u.coeffs())
}

pub fn element_json(x: &FieldElement) -> Value {
    let c = x.coeffs();
    if c.len() == 1 {
        Value::String(c[0].to_string())
    } else {
        Value::Array(c.iter().map(|v| Value::String(v.to_string())).collect())
    }
}

/// Extension description and point list.
pub fn points_json(ctx: &Arc<FieldContext>, pts: &[Vec<FieldElement>]) -> Value {
    json!({
        "extension_degree": ctx.degree(),
        "extension_modulus": ctx.modulus().iter().map(u64::to_string).collect::<Vec<_>>(),
        "count": pts.len(),
        "points": pts.iter().map(|pt| pt.iter().map(element_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn generic_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn resolution_json(res: &GeometricResolution) -> Value {
    let mut m = Map::new();
    m.insert("field".into(), Value::String(res.p.to_string()));
    m.insert("n".into(), json!(res.n));
    m.insert("free".into(), json!(res.r));
    m.insert("mode".into(), json!(res.mode.tag()));
    if let Mode::Avoid(g) = &res.mode {
        m.insert("avoid".into(), Value::String(print_slp(g, &generic_names(res.n), None)));
    }
    let rows: Vec<Value> = (0..res.change.rows())
        .map(|i| Value::Array((0..res.change.cols()).map(|j| fp_json(*res.change.get(i, j))).collect()))
        .collect();
    m.insert("change".into(), Value::Array(rows));
    m.insert("lambda".into(), fps_json(&res.lambda));
    m.insert("degree".into(), json!(res.degree()));
    m.insert("q".into(), upoly_json(&res.q));
    m.insert("rho".into(), mpoly_json(&res.rho));
    m.insert("v".into(), Value::Array(res.v.iter().map(upoly_json).collect()));
    m.insert("v_den".into(), mpoly_json(&res.v_den));
    Value::Object(m)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(format!("resolution JSON: {}", msg.into()))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("`{key}` is not a count")))
}

fn parse_fp(v: &Value, p: u64) -> Result<Fp> {
    let s = v.as_str().ok_or_else(|| bad("field element is not a string"))?;
    let x: u64 = s.parse().map_err(|_| bad(format!("bad field element `{s}`")))?;
    if x >= p {
        return Err(bad(format!("`{s}` is not reduced modulo {p}")));
    }
    Ok(Fp::from_u64(x, p))
}

fn parse_fps(v: &Value, p: u64) -> Result<Vec<Fp>> {
    v.as_array().ok_or_else(|| bad("expected an array"))?.iter().map(|x| parse_fp(x, p)).collect()
}

fn parse_mpoly(v: &Value, r: usize, p: u64) -> Result<MPoly<Fp>> {
    let z = Fp::zero(p);
    if r == 0 {
        return Ok(MPoly::constant(parse_fp(v, p)?, 0));
    }
    let mut terms = Vec::new();
    for t in v.as_array().ok_or_else(|| bad("expected a term list"))? {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term is not a pair"))?;
        let e: Vec<u32> = pair[0]
            .as_array()
            .filter(|a| a.len() == r)
            .ok_or_else(|| bad("bad exponent vector"))?
            .iter()
            .map(|k| k.as_u64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        terms.push((e, parse_fp(&pair[1], p)?));
    }
    Ok(MPoly::from_terms(r, terms, &z))
}

fn parse_upoly(v: &Value, r: usize, p: u64) -> Result<UPoly<MPoly<Fp>>> {
    let z = MPoly::zero(r, &Fp::zero(p));
    let cs = v.as_array().ok_or_else(|| bad("expected a coefficient array"))?;
    let cs: Vec<MPoly<Fp>> = cs.iter().map(|c| parse_mpoly(c, r, p)).collect::<Result<_>>()?;
    let u = UPoly::new(cs.clone(), z);
    if u.coeffs().len() != cs.len() {
        return Err(bad("coefficient array has trailing zeros"));
    }
    Ok(u)
}

/// Inverse of [`resolution_json`].
pub fn resolution_from_json(v: &Value) -> Result<GeometricResolution> {
    let p: u64 = get(v, "field")?.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad `field`"))?;
    if !crate::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = as_usize(v, "n")?;
    let r = as_usize(v, "free")?;
    if r > n || n == 0 {
        return Err(bad("inconsistent `n` and `free`"));
    }
    let mode = match get(v, "mode")?.as_str() {
        Some("affine") => Mode::Affine,
        Some("toric") => Mode::Toric,
        Some("avoid") => {
            let text = get(v, "avoid")?.as_str().ok_or_else(|| bad("`avoid` is not a string"))?;
            let f = parse_slp(text, p)?;
            if f.circuit.num_inputs() != n || f.circuit.num_outputs() != 1 {
                return Err(bad("`avoid` must be one equation in n variables"));
            }
            Mode::Avoid(f.circuit)
        }
        _ => return Err(bad("unknown `mode`")),
    };
    let rows = get(v, "change")?.as_array().filter(|a| a.len() == n).ok_or_else(|| bad("`change` must have n rows"))?;
    let rows: Vec<Vec<Fp>> = rows.iter().map(|row| parse_fps(row, p)).collect::<Result<_>>()?;
    if rows.iter().any(|row| row.len() != n) {
        return Err(bad("`change` must be square"));
    }
    let change = Matrix::from_rows(rows, &Fp::zero(p));
    let lambda = parse_fps(get(v, "lambda")?, p)?;
    let q = parse_upoly(get(v, "q")?, r, p)?;
    let rho = parse_mpoly(get(v, "rho")?, r, p)?;
    let v_den = parse_mpoly(get(v, "v_den")?, r, p)?;
    let vs = get(v, "v")?.as_array().ok_or_else(|| bad("`v` is not an array"))?;
    let vs: Vec<UPoly<MPoly<Fp>>> = vs.iter().map(|x| parse_upoly(x, r, p)).collect::<Result<_>>()?;
    if q.is_zero() {
        return Err(bad("`q` is zero"));
    }
    if let Some(d) = v.get("degree") {
        if d.as_u64() != Some(q.degree() as u64) {
            return Err(bad("`degree` disagrees with `q`"));
        }
    }
    Ok(GeometricResolution { p, n, r, change, lambda, q, rho, v: vs, v_den, mode })
}

/// Everything `solve` prints, except the optional point lists.
pub fn solution_json(sol: &Solution, vars: &[String], seed: u64) -> Value {
    let mut m = match resolution_json(&sol.resolution) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    m.insert("variables".into(), json!(vars));
    m.insert("seed".into(), Value::String(seed.to_string()));
    m.insert("degree_ledger".into(), json!(sol.degree_ledger()));
    m.insert("steps".into(), serde_json::to_value(&sol.steps).expect("step log serializes"));
    m.insert("combination".into(), Value::Array(sol.combination.iter().map(|r| fps_json(r)).collect()));
    m.insert("attempts".into(), json!(sol.attempts));
    m.insert(
        "input_cost".into(),
        json!({"size": sol.input_cost.size, "depth": sol.input_cost.depth, "gates": sol.input_cost.gates}),
    );
    m.insert("omega".into(), Value::String(sol.omega.to_string()));
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON renders");
    s.push('\n');
    s
}

/// Zero-dimensional data specialized to 𝔽_p coefficients.
pub fn univariate(u: &UPoly<MPoly<Fp>>, p: u64) -> UPoly<Fp> {
    u.map(&Fp::zero(p), |c| c.constant_term())
}
