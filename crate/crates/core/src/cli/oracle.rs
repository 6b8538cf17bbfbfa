//! Exhaustive enumeration of solutions, the reference for everything the solver returns.

use std::sync::Arc;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, FiniteField, Fp};
use crate::ring::Ring;

/// Largest number of points the oracle will scan.
pub const ORACLE_LIMIT: u128 = 100_000_000;

/// Every point of 𝔽_{p^e}^n where all outputs of `system` vanish, sorted
/// lexicographically by coefficient vectors. The extension is the one `ctx`
/// describes; pass `FieldContext::prime(p)` for e = 1.
pub fn oracle_enumerate(system: &Circuit, ctx: &Arc<FieldContext>) -> Result<Vec<Vec<FieldElement>>> {
    let p = system.modulus();
    if ctx.characteristic() != p {
        return Err(Error::Invalid("extension of the wrong characteristic".into()));
    }
    let n = system.num_inputs();
    let guard = || Error::Invalid(format!("oracle scan of {}^{} points exceeds {ORACLE_LIMIT}", ctx.order().map_or("?".into(), |q| q.to_string()), n));
    let q = ctx.order().ok_or_else(guard)?;
    let total = q.checked_pow(n as u32).filter(|&t| t <= ORACLE_LIMIT).ok_or_else(guard)?;
    let mut out = Vec::new();
    if ctx.degree() == 1 {
        let mut pt = vec![Fp::zero(p); n];
        for idx in 0..total {
            let mut k = idx;
            for x in pt.iter_mut() {
                *x = Fp::from_u64((k % q) as u64, p);
                k /= q;
            }
            if all_zero_fp(system, &pt) {
                out.push(pt.iter().map(|&x| ctx.from_base(x)).collect());
            }
        }
    } else {
        let like = ctx.zero();
        let mut pt = vec![like.clone(); n];
        for idx in 0..total {
            let mut k = idx;
            for x in pt.iter_mut() {
                *x = ctx.nth(k % q);
                k /= q;
            }
            let vals = system.evaluate(&pt, &like);
            if matches!(vals, Ok(v) if v.iter().all(|x| x.is_zero())) {
                out.push(pt.clone());
            }
        }
    }
    out.sort_by_key(|pt| pt.iter().map(|x| x.coords()).collect::<Vec<_>>());
    Ok(out)
}

/// Points with coordinates in 𝔽_p.
pub fn oracle_rational(system: &Circuit) -> Result<Vec<Vec<Fp>>> {
    let ctx = FieldContext::prime(system.modulus())?;
    Ok(oracle_enumerate(system, &ctx)?
        .into_iter()
        .map(|pt| pt.iter().map(|x| x.to_base().expect("prime field element")).collect())
        .collect())
}

fn all_zero_fp(system: &Circuit, pt: &[Fp]) -> bool {
    // a point where some division fails is not a solution
    matches!(system.eval_fp(pt), Ok(v) if v.iter().all(Ring::is_zero))
}
