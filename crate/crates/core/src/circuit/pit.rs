//! Identity testing against a fixed sample set.

use super::Circuit;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::ring::Ring;

/// Sample-set size ω = (2^{ℓ+1}−2)(2^ℓ+1)²; saturates on overflow.
///
/// Depth 0 is treated as depth 1, since ω vanishes there.
pub fn omega_for_depth(depth: usize) -> u128 {
    let l = depth.max(1) as u32;
    if l >= 40 {
        return u128::MAX;
    }
    let a = (1u128 << (l + 1)) - 2;
    let b = (1u128 << l) + 1;
    a.saturating_mul(b).saturating_mul(b)
}

/// Sequence length σ = 6(ℓL)², with ℓ and L at least 1.
pub fn sigma_for(depth: usize, size: usize) -> usize {
    let t = depth.max(1).saturating_mul(size.max(1));
    t.saturating_mul(t).saturating_mul(6)
}

/// Points of Ω^n, Ω = {0, …, ω−1}, for circuits with n inputs, depth ≤ ℓ and size ≤ L.
#[derive(Clone, Debug)]
pub struct CorrectTestSequence {
    pub omega: u128,
    pub sigma: usize,
    pub depth: usize,
    pub size: usize,
    pub n: usize,
    pub points: Vec<Vec<Fp>>,
}

impl CorrectTestSequence {
    pub fn new<G: rand::Rng + ?Sized>(p: u64, n: usize, depth: usize, size: usize, rng: &mut G) -> Result<Self> {
        let omega = omega_for_depth(depth);
        if (p as u128) < omega {
            return Err(Error::FieldTooSmall { p, need: u64::try_from(omega).unwrap_or(u64::MAX) });
        }
        let sigma = sigma_for(depth, size);
        let w = omega as u64;
        let points = (0..sigma).map(|_| (0..n).map(|_| Fp::from_u64(rng.gen_range(0..w), p)).collect()).collect();
        Ok(CorrectTestSequence { omega, sigma, depth, size, n, points })
    }

    /// Upper bound ω^{−σ/6} on the chance that the sequence is not correct.
    pub fn failure_bound(&self) -> f64 {
        (self.omega as f64).powf(-(self.sigma as f64) / 6.0)
    }
}

/// True when every output vanishes at every test point.
pub fn pit_is_zero(c: &Circuit, cts: &CorrectTestSequence) -> Result<bool> {
    if c.num_inputs() != cts.n {
        return Err(Error::Arity { expected: cts.n, got: c.num_inputs() });
    }
    let m = c.measure();
    if m.size > cts.size.max(1) || m.depth > cts.depth.max(1) {
        return Err(Error::Hypothesis(format!(
            "circuit (L={}, depth={}) outside the tested class (L={}, depth={})",
            m.size, m.depth, cts.size, cts.depth
        )));
    }
    for pt in &cts.points {
        if c.eval_fp(pt)?.iter().any(|v| !v.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}
