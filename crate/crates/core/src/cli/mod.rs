//! Command-line front end: parse a system, solve, verify, enumerate, measure.
//!
//! JSON goes to stdout and diagnostics to stderr. Exit codes: 0 success,
//! 2 parse error, 3 hypothesis violation, 4 field too small, 5 certificate
//! or internal failure.

pub mod json;
pub mod oracle;
pub mod system;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::circuit::{gradient, homogenize, sigma_for};
use crate::error::{Error, Result};
use crate::field::{FieldContext, Fp};
use crate::lifting::{newton_steps, Precision};
use crate::resolution::Mode;
use crate::solver::{eliminating_poly, solve, SolverConfig};

pub use oracle::{oracle_enumerate, oracle_rational};
pub use system::{parse_system, SystemFile};

#[derive(Parser, Debug)]
#[command(name = "geores", version, about = "Geometric resolutions of polynomial systems over prime fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrecisionArg {
    Safe,
    Sharp,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute a geometric resolution and its points.
    Solve {
        system: Option<PathBuf>,
        /// `affine`, `toric`, or `avoid <file>`; `avoid` alone uses the system's own avoid line.
        #[arg(long, num_args = 1..=2, value_names = ["MODE", "FILE"], default_value = "affine")]
        mode: Vec<String>,
        #[arg(long, env = "GEORES_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "safe")]
        precision: PrecisionArg,
        /// Coefficients a1,...,an of H = Σ a_i x_i; prints p with p(H) = 0 on the solutions.
        #[arg(long, allow_hyphen_values = true)]
        eliminate: Option<String>,
        /// Restarts allowed after unlucky random choices.
        #[arg(long, default_value_t = 8)]
        retries: usize,
        /// Skip the per-level validation.
        #[arg(long)]
        no_verify: bool,
    },
    /// Re-check a stored resolution against a system.
    Verify { system: PathBuf, resolution: PathBuf },
    /// Enumerate all solutions over 𝔽_{p^e} by exhaustive search.
    Oracle {
        system: PathBuf,
        #[arg(long, default_value_t = 1)]
        extension: usize,
        #[arg(long, env = "GEORES_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Report measured circuit sizes per stage next to their documented bounds.
    Bench {
        system: PathBuf,
        #[arg(long, env = "GEORES_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// Run with the given arguments (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<SystemFile> {
    parse_system(&read(path)?)
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    out.write_all(json::render(v).as_bytes()).map_err(|e| Error::Invalid(format!("cannot write output: {e}")))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Solve { system, mut mode, seed, precision, eliminate, retries, no_verify } => {
            // `--mode M FILE` swallows the system path; with a single path after
            // `--mode avoid` that path is the system and its avoid line is used
            let system = match system {
                Some(s) => s,
                None if mode.len() == 2 => PathBuf::from(mode.pop().unwrap()),
                None => return Err(Error::Invalid("missing system file".into())),
            };
            let sys = load_system(&system)?;
            let mode = parse_mode(&mode, &sys)?;
            let precision = match precision {
                PrecisionArg::Safe => Precision::Safe,
                PrecisionArg::Sharp => Precision::Sharp,
            };
            let alpha = eliminate.as_deref().map(|s| parse_alpha(s, &sys)).transpose()?;
            let v = solve_json(&sys, mode, seed, precision, retries, !no_verify, alpha.as_deref())?;
            emit(out, &v)?;
            Ok(0)
        }
        Cmd::Verify { system, resolution } => {
            let sys = load_system(&system)?;
            let text = read(&resolution)?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("resolution JSON: {e}")))?;
            let res = json::resolution_from_json(&value)?;
            if res.p != sys.p() {
                return Err(Error::Invalid("resolution and system use different fields".into()));
            }
            let rep = res.validate(&sys.circuit);
            emit(out, &json!({"ok": rep.ok(), "checks": rep.checks}))?;
            if rep.ok() {
                Ok(0)
            } else {
                for c in rep.failures() {
                    let _ = writeln!(err, "check `{}` failed: {}", c.name, c.witness.clone().unwrap_or_default());
                }
                Ok(5)
            }
        }
        Cmd::Oracle { system, extension, seed } => {
            let sys = load_system(&system)?;
            if extension == 0 {
                return Err(Error::Invalid("extension degree must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ctx = FieldContext::random(sys.p(), extension, &mut rng)?;
            let pts = oracle_enumerate(&sys.circuit, &ctx)?;
            let mut v = json::points_json(&ctx, &pts);
            v["field"] = Value::String(sys.p().to_string());
            v["variables"] = json!(sys.vars);
            emit(out, &v)?;
            Ok(0)
        }
        Cmd::Bench { system, seed } => {
            let sys = load_system(&system)?;
            emit(out, &bench_json(&sys, seed)?)?;
            Ok(0)
        }
    }
}

fn parse_mode(words: &[String], sys: &SystemFile) -> Result<Mode> {
    match words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["affine"] => Ok(Mode::Affine),
        ["toric"] => Ok(Mode::Toric),
        ["avoid"] => sys.avoid.clone().map(Mode::Avoid).ok_or_else(|| Error::Invalid("`--mode avoid` needs a file or an avoid line".into())),
        ["avoid", file] => {
            let g = load_system(Path::new(file))?;
            if g.p() != sys.p() || g.n() != sys.n() {
                return Err(Error::Invalid("avoided hypersurface must use the same field and variable count".into()));
            }
            let s = g.s();
            let c = match (g.avoid, s) {
                (Some(a), _) => a,
                (None, 1) => g.circuit,
                _ => return Err(Error::Invalid("avoid file must contain exactly one equation".into())),
            };
            Ok(Mode::Avoid(c))
        }
        other => Err(Error::Invalid(format!("unknown mode `{}`", other.join(" ")))),
    }
}

fn parse_alpha(s: &str, sys: &SystemFile) -> Result<Vec<Fp>> {
    let p = sys.p();
    let v: Vec<Fp> = s
        .split(',')
        .map(|t| crate::circuit::text::parse_int(t.trim(), p).ok_or_else(|| Error::Invalid(format!("bad coefficient `{t}`"))))
        .collect::<Result<_>>()?;
    if v.len() != sys.n() {
        return Err(Error::Arity { expected: sys.n(), got: v.len() });
    }
    Ok(v)
}

/// Solve and assemble the complete `solve` output.
pub fn solve_json(
    sys: &SystemFile,
    mode: Mode,
    seed: u64,
    precision: Precision,
    retries: usize,
    verify: bool,
    alpha: Option<&[Fp]>,
) -> Result<Value> {
    let cfg = SolverConfig { mode, seed, retries, precision, verify, degree_bounds: sys.degrees.clone() };
    let sol = solve(&sys.circuit, &cfg)?;
    let mut v = json::solution_json(&sol, &sys.vars, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed0f0a11);
    let (ctx, pts) = sol.resolution.enumerate_points(&mut rng)?;
    v["points"] = json::points_json(&ctx, &pts);
    let rational: Vec<Vec<Fp>> = sol.resolution.rational_points(&mut rng)?;
    v["rational_points"] = Value::Array(rational.iter().map(|pt| json::fps_json(pt)).collect());
    if let Some(alpha) = alpha {
        let e = eliminating_poly(&sol.resolution, alpha)?;
        v["eliminating"] = json!({"alpha": json::fps_json(alpha), "poly": json::upoly_fp_json(&e)});
    }
    Ok(v)
}

fn bench_json(sys: &SystemFile, seed: u64) -> Result<Value> {
    let cost = sys.cost();
    let mut stages = Vec::new();
    stages.push(json!({"stage": "input", "size": cost.size, "depth": cost.depth}));
    if let Some(deg) = &sys.degrees {
        if !sys.circuit.has_division() {
            let d = deg.iter().copied().max().unwrap_or(0) as usize;
            let h = homogenize(&sys.circuit, deg)?.measure();
            let depth_bound = ceil_log2(d.max(1)) + 2 * cost.depth;
            stages.push(json!({
                "stage": "homogenize",
                "size": h.size,
                "depth": h.depth,
                "size_bound": d * (d + 1) * (d + 1) * cost.size,
                "depth_bound": depth_bound,
            }));
        }
    }
    let mut grad_size = 0;
    let mut grad_depth = 0;
    if !sys.circuit.has_division() {
        for k in 0..sys.s() {
            let g = gradient(&sys.circuit.select_outputs(&[k]).pruned())?.measure();
            grad_size += g.size;
            grad_depth = grad_depth.max(g.depth);
        }
        stages.push(json!({"stage": "gradient", "size": grad_size, "depth": grad_depth, "input_size": cost.size}));
    }
    let omega = crate::circuit::omega_for_depth(cost.depth);
    stages.push(json!({
        "stage": "identity_test",
        "omega": omega.to_string(),
        "sigma": sigma_for(cost.depth, cost.size).to_string(),
        "field": sys.p().to_string(),
        "field_ok": (sys.p() as u128) >= omega,
    }));
    let started = Instant::now();
    let cfg = SolverConfig { seed, degree_bounds: sys.degrees.clone(), ..SolverConfig::default() };
    let solved = solve(&sys.circuit, &cfg);
    let elapsed = started.elapsed().as_millis() as u64;
    let levels = match &solved {
        Ok(sol) => {
            let mut bezout = 1u64;
            sol.steps
                .iter()
                .enumerate()
                .map(|(i, st)| {
                    bezout = bezout.saturating_mul(u64::from(sys.degrees.as_ref().and_then(|d| d.get(i).copied()).unwrap_or(0)));
                    let newton = st.compress.as_ref().map(|c| (c.newton_steps, newton_steps(st.degree)));
                    json!({
                        "level": st.level,
                        "degree": st.degree,
                        "bezout_bound": bezout,
                        "newton_steps": newton.map(|n| n.0),
                        "newton_steps_bound": newton.map(|n| n.1),
                        "rho_degree": st.rho_degree,
                        "max_total_degree": st.max_total_degree,
                        "degree_bound_2d3": 2 * (st.degree as u64).pow(3),
                    })
                })
                .collect::<Vec<_>>()
        }
        Err(_) => Vec::new(),
    };
    Ok(json!({
        "field": sys.p().to_string(),
        "n": sys.n(),
        "s": sys.s(),
        "d": sys.d(),
        "stages": stages,
        "solve": {
            "ok": solved.is_ok(),
            "error": solved.as_ref().err().map(|e| e.to_string()),
            "levels": levels,
            "elapsed_ms": elapsed,
        },
    }))
}

fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as usize
}
