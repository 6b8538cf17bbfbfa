//! Seeded random circuits for tests and benchmarks.

use super::{Builder, Circuit};
use crate::field::Fp;

/// Shape of a random division-free circuit.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub inputs: usize,
    /// Exact number of nonscalar multiplications.
    pub muls: usize,
    pub outputs: usize,
    /// Cap on the syntactic degree of every gate.
    pub max_degree: u32,
}

/// Each multiplication multiplies two random affine combinations of earlier
/// gates; outputs are random affine combinations ending in the last product.
pub fn random_circuit<G: rand::Rng + ?Sized>(p: u64, spec: RandomSpec, rng: &mut G) -> Circuit {
    let mut b = Builder::new(p, spec.inputs);
    let mut pool: Vec<(usize, u32)> = (0..spec.inputs).map(|i| (b.input(i), 1)).collect();
    let muls = if spec.max_degree >= 2 && spec.inputs > 0 { spec.muls } else { 0 };
    let form = |b: &mut Builder, pool: &[(usize, u32)], cap: u32, rng: &mut G| -> (usize, u32) {
        let ok: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].1 <= cap).collect();
        let i = ok[rng.gen_range(0..ok.len())];
        let mut deg = pool[i].1;
        let mut terms = vec![(Fp::random_nonzero(p, rng), pool[i].0)];
        if ok.len() > 1 {
            let mut j = ok[rng.gen_range(0..ok.len())];
            while j == i {
                j = ok[rng.gen_range(0..ok.len())];
            }
            deg = deg.max(pool[j].1);
            terms.push((Fp::random_nonzero(p, rng), pool[j].0));
        }
        let lin = b.linear(&terms).unwrap();
        let k = b.constant(Fp::random(p, rng));
        (b.add(lin, k), deg)
    };
    for _ in 0..muls {
        let (x, dx) = form(&mut b, &pool, spec.max_degree - 1, rng);
        let (y, dy) = form(&mut b, &pool, spec.max_degree - dx, rng);
        let g = b.mul(x, y);
        pool.push((g, dx + dy));
    }
    let mut outs = Vec::with_capacity(spec.outputs);
    for _ in 0..spec.outputs {
        let out = if pool.is_empty() {
            b.constant(Fp::random(p, rng))
        } else {
            let (x, _) = form(&mut b, &pool, spec.max_degree.max(1), rng);
            let last = pool.last().unwrap().0;
            let s = b.scale(Fp::random_nonzero(p, rng), last);
            b.add(x, s)
        };
        outs.push(out);
    }
    b.finish(outs)
}
