mod common;

use common::{rand_poly, values};
use geores::circuit::Circuit;
use geores::cli::{oracle_rational, parse_system};
use geores::resolution::Mode;
use geores::solver::{eliminating_poly, solve, Solution, SolverConfig};
use geores::{Error, Fp, Ring, UPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sys(text: &str) -> Circuit {
    parse_system(text).unwrap().circuit
}

fn run(c: &Circuit, mode: Mode) -> Solution {
    solve(c, &SolverConfig { mode, ..Default::default() }).unwrap()
}

fn rational(sol: &Solution, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    values(&sol.resolution.rational_points(&mut rng).unwrap())
}

#[test]
fn diagonal_square_roots() {
    let c = sys("field 23\nvars x1 x2\neq x1^2 - 2\neq x2^2 - 3\n");
    let sol = run(&c, Mode::Affine);
    assert_eq!(sol.resolution.degree(), 4);
    let want = vec![vec![5, 7], vec![5, 16], vec![18, 7], vec![18, 16]];
    assert_eq!(values(&oracle_rational(&c).unwrap()), want);
    assert_eq!(rational(&sol, 1), want);
}

#[test]
fn toric_mode_drops_the_hyperplane_point() {
    let c = sys("field 101\nvars x\neq x^2 - x\n");
    assert_eq!(run(&c, Mode::Affine).resolution.degree(), 2);
    let toric = run(&c, Mode::Toric);
    assert_eq!(toric.resolution.degree(), 1);
    assert_eq!(rational(&toric, 2), vec![vec![1]]);
}

#[test]
fn avoid_mode_drops_points_on_the_hypersurface() {
    let c = sys("field 23\nvars x y\neq x^2 + y^2 - 2\neq x - y\n");
    let g = sys("field 23\nvars x y\neq x - 1\n");
    let sol = run(&c, Mode::Avoid(g));
    assert_eq!(sol.degree_ledger(), vec![2, 1]);
    assert_eq!(rational(&sol, 3), vec![vec![22, 22]]);
}

#[test]
fn points_outside_the_prime_field() {
    // x² + 1 has no root in 𝔽_23
    let c = sys("field 23\nvars x y\neq x^2 + 1\neq y - x - 3\n");
    let sol = run(&c, Mode::Affine);
    assert_eq!(sol.resolution.degree(), 2);
    assert!(rational(&sol, 4).is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (ctx, pts) = sol.resolution.enumerate_points(&mut rng).unwrap();
    assert_eq!(pts.len(), 2);
    for pt in &pts {
        assert!(c.evaluate(pt, &ctx.zero()).unwrap().iter().all(Ring::is_zero));
    }
}

#[test]
fn eliminating_polynomial_vanishes_on_the_points() {
    let c = sys("field 23\nvars x1 x2\neq x1^2 - 2\neq x2^2 - 3\n");
    let sol = run(&c, Mode::Affine);
    let alpha = [Fp::new(1, 23), Fp::new(2, 23)];
    let e = eliminating_poly(&sol.resolution, &alpha).unwrap();
    // ∏ (T − (x1 + 2·x2)) over the four points
    let mut want = UPoly::constant(Fp::one(23));
    for [a, b] in [[5, 7], [5, 16], [18, 7], [18, 16]] {
        let h = Fp::new(a + 2 * b, 23);
        want = want.mul(&UPoly::new(vec![h.neg(), Fp::one(23)], Fp::zero(23)));
    }
    assert_eq!(e, want);
    assert!(eliminating_poly(&sol.resolution, &[Fp::zero(23), Fp::zero(23)]).is_err());
}

#[test]
fn degrees_respect_the_documented_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..6 {
        let (p, n, d) = if seed % 2 == 0 { (10007, 3, 2) } else { (10007, 2, 3) };
        let polys: Vec<_> = (0..n).map(|_| rand_poly(p, n, d, &mut rng)).collect();
        let sol = run(&Circuit::from_polys(p, n, &polys), Mode::Affine);
        let mut bezout = 1;
        for st in &sol.steps {
            bezout *= d as usize;
            let bound = 2 * (st.degree as i64).pow(3);
            assert!(st.degree <= bezout);
            assert!(st.rho_degree <= bound && st.max_total_degree <= bound);
        }
        let ledger = sol.degree_ledger();
        assert!(ledger.windows(2).all(|w| w[1] <= w[0] * d as usize));
        let res = &sol.resolution;
        assert!(res.v.iter().all(|v| v.degree() < res.degree() as isize));
        assert!(res.validate(&Circuit::from_polys(p, n, &polys)).ok());
    }
}

#[test]
fn agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..8u64 {
        let p = if trial % 2 == 0 { 101 } else { 401 };
        let (n, d) = if trial % 2 == 0 { (3, 2) } else { (2, 3) };
        let polys: Vec<_> = (0..n).map(|_| rand_poly(p, n, d, &mut rng)).collect();
        let c = Circuit::from_polys(p, n, &polys);
        let sol = solve(&c, &SolverConfig { seed: trial, ..Default::default() }).unwrap();
        assert_eq!(rational(&sol, trial), values(&oracle_rational(&c).unwrap()), "trial {trial}");
    }
}

#[test]
fn overdetermined_systems_are_combined() {
    let c = sys("field 101\nvars x y\neq x^2 - 1\neq y - x\neq x*y - 1\n");
    let sol = run(&c, Mode::Affine);
    assert_eq!(sol.resolution.degree(), 2);
    assert_eq!(rational(&sol, 6), vec![vec![1, 1], vec![100, 100]]);
}

#[test]
fn empty_variety_has_degree_zero() {
    let sol = run(&sys("field 101\nvars x y\neq x*y - 1\neq x\n"), Mode::Affine);
    assert_eq!(sol.resolution.degree(), 0);
    assert!(rational(&sol, 7).is_empty());
}

#[test]
fn hypotheses_are_enforced() {
    let cases = [
        ("field 101\nvars x y\neq x^2\neq y\n", "not radical"),
        ("field 101\nvars x y\neq (x - y)^2\neq x + y - 2\n", "not radical"),
        ("field 101\nvars x y\neq x^2 + y^2 - 1\n", "finite"),
        ("field 101\nvars x y\neq x^2 - y\neq x^2 - y\n", "coincide"),
        ("field 101\nvars x y\neq x - y\neq 0\n", "vanishes"),
    ];
    for (text, needle) in cases {
        match solve(&sys(text), &SolverConfig::default()) {
            Err(Error::Hypothesis(msg)) => assert!(msg.contains(needle), "{text}: {msg}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn small_fields_are_refused() {
    let c = sys("field 23\nvars x y\neq x^3 + x*y^2 - 1\neq y^3 - x^2*y + 2\n");
    assert!(matches!(solve(&c, &SolverConfig::default()), Err(Error::FieldTooSmall { p: 23, .. })));
}

#[test]
fn same_seed_same_result() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let polys: Vec<_> = (0..2).map(|_| rand_poly(10007, 2, 3, &mut rng)).collect();
    let c = Circuit::from_polys(10007, 2, &polys);
    let seed = rng.gen();
    let cfg = SolverConfig { seed, ..Default::default() };
    let (a, b) = (solve(&c, &cfg).unwrap(), solve(&c, &cfg).unwrap());
    let (ra, rb) = (&a.resolution, &b.resolution);
    assert!(ra.q == rb.q && ra.rho == rb.rho && ra.v == rb.v && ra.lambda == rb.lambda);
    assert_eq!(a.combination, b.combination);
    assert_eq!(a.degree_ledger(), b.degree_ledger());
}
