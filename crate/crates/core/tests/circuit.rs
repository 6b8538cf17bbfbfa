mod common;

use common::{division_case, embed, rand_poly, single};
use geores::circuit::text::{parse_slp, print_slp};
use geores::circuit::{
    compose_linear, eliminate_divisions, generic_combinations, gradient, homogenize, omega_for_depth, pit_is_zero,
    random_circuit, sigma_for, Builder, Circuit, CorrectTestSequence, Gate, RandomSpec,
};
use geores::matrix::Matrix;
use geores::{Error, Fp, MPoly, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 10007;

/// X₀^D·f(X/X₀) computed term by term.
fn homogenize_dense(f: &MPoly<Fp>, d: u32) -> MPoly<Fp> {
    let n = f.nvars();
    let terms = f.terms().map(|(e, c)| {
        let mut h = vec![d - e.iter().sum::<u32>()];
        h.extend(e.iter().copied());
        (h, *c)
    });
    MPoly::from_terms(n + 1, terms.collect::<Vec<_>>(), &Fp::zero(P))
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[test]
fn cost_of_a_small_program() {
    let f = parse_slp("field 23\ninputs x y\nt = mul x y\nu = scale 3 t\nv = mul u u\nw = add v 1\nout w\n", 10007).unwrap();
    let m = f.circuit.measure();
    assert_eq!((m.size, m.depth), (2, 2));
    assert_eq!(f.circuit.modulus(), 23);
    let dense = f.circuit.dense_expand().unwrap();
    let z = Fp::zero(23);
    let want = MPoly::from_terms(2, vec![(vec![2, 2], Fp::new(9, 23)), (vec![0, 0], Fp::one(23))], &z);
    assert_eq!(dense[0], want);
}

#[test]
fn square_program_has_size_one() {
    let f = parse_slp("inputs x\ng = mul x x\nout g\n", 10007).unwrap();
    assert_eq!(f.circuit.measure().size, 1);
    assert_eq!(f.circuit.modulus(), 10007);
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let c = random_circuit(P, RandomSpec { inputs: 3, muls: 8, outputs: 2, max_degree: 5 }, &mut rng);
        let text = print_slp(&c, &names(3), Some(&[5, 5]));
        let back = parse_slp(&text, 2).unwrap();
        assert_eq!(back.circuit.dense_expand().unwrap(), c.dense_expand().unwrap());
        assert_eq!(back.circuit.measure(), c.measure());
        assert_eq!(back.degrees, Some(vec![5, 5]));
        assert_eq!(back.inputs, names(3));
    }
}

#[test]
fn printer_avoids_input_names() {
    let ins = vec!["g1".to_string(), "g2".to_string()];
    let f = parse_slp("inputs g1 g2\nt = mul g1 g2\nout t\n", P).unwrap();
    let text = print_slp(&f.circuit, &ins, None);
    let back = parse_slp(&text, P).unwrap();
    assert_eq!(back.circuit.dense_expand().unwrap(), f.circuit.dense_expand().unwrap());
}

#[test]
fn syntax_errors_carry_positions() {
    let cases = [
        ("inputs x\ng = mul x y\nout g\n", 2, 11),
        ("inputs x\ng = pow x 2\nout g\n", 2, 5),
        ("field 24\ninputs x\n", 0, 0),
        ("inputs x x\n", 1, 10),
    ];
    for (text, line, col) in cases {
        match parse_slp(text, P) {
            Err(Error::Syntax { line: l, col: c, .. }) => assert_eq!((l, c), (line, col), "{text:?}"),
            Err(Error::NotPrime(24)) => assert_eq!(line, 0),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn malformed_gate_lists_are_rejected() {
    assert!(Circuit::new(P, 1, vec![Gate::Input(0), Gate::Add(0, 1)], vec![1]).is_err());
    assert!(Circuit::new(P, 1, vec![Gate::Input(1)], vec![0]).is_err());
    assert!(Circuit::new(P, 1, vec![Gate::Input(0)], vec![3]).is_err());
}

#[test]
fn homogenization_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let c = single(P, 3, rng.gen_range(1..6), 4, &mut rng);
        let f = &c.dense_expand().unwrap()[0];
        let d = f.total_degree().max(0) as u32 + rng.gen_range(0..2);
        let h = homogenize(&c, &[d]).unwrap();
        assert_eq!(h.num_inputs(), 4);
        let hd = &h.dense_expand().unwrap()[0];
        assert!(hd.is_homogeneous());
        assert_eq!(*hd, homogenize_dense(f, d));
    }
}

#[test]
fn homogenization_rejects_low_degree_bound() {
    let f = parse_slp("inputs x\ng = mul x x\nout g\n", P).unwrap();
    assert_eq!(homogenize(&f.circuit, &[1]).unwrap_err(), Error::DegreeBound { output: 0, bound: 1 });
}

#[test]
fn homogenization_size_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let c = single(P, 3, rng.gen_range(1..10), 4, &mut rng);
        let d = c.syntactic_degrees()[c.outputs()[0]].unwrap();
        let l = c.measure().size;
        let h = homogenize(&c, &[d]).unwrap();
        assert!(h.measure().size <= (d * (d + 1) * (d + 1)) as usize * l);
    }
}

#[test]
fn gradient_matches_formal_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let c = single(P, 3, rng.gen_range(1..12), 6, &mut rng);
        let f = &c.dense_expand().unwrap()[0];
        let g = gradient(&c).unwrap();
        assert_eq!(g.num_outputs(), 3);
        let dense = g.dense_expand().unwrap();
        for (k, dk) in dense.iter().enumerate() {
            assert_eq!(*dk, f.partial(k));
        }
    }
}

#[test]
fn gradient_of_a_quotient() {
    // d/dx (x²/(x+1)) = (x² + 2x)/(x + 1)²
    let f = parse_slp("inputs x\nu = mul x x\nv = add x 1\nw = div u v\nout w\n", P).unwrap();
    let g = gradient(&f.circuit).unwrap();
    for x in [2i64, 5, 17] {
        let xv = Fp::new(x, P);
        let want = Fp::new(x * x + 2 * x, P).mul(&Fp::new((x + 1) * (x + 1), P).inv().unwrap());
        assert_eq!(g.eval_fp(&[xv]).unwrap()[0], want);
    }
    let two = parse_slp("inputs x\nout x x\n", P).unwrap();
    assert_eq!(gradient(&two.circuit).unwrap_err(), Error::NotSingleOutput(2));
}

#[test]
fn division_elimination_preserves_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for i in 0..40 {
        let case = division_case(P, 2, i % 5 == 0, &mut rng);
        let out = eliminate_divisions(&case.with_div, &case.center, case.degree);
        if case.precondition() {
            let out = out.unwrap();
            assert!(!out.has_division());
            assert_eq!(out.dense_expand().unwrap(), case.reference.dense_expand().unwrap());
            checked += 1;
        } else {
            assert!(matches!(out, Err(Error::DivisionByZero(_))));
        }
    }
    assert!(checked >= 25);
}

#[test]
fn linear_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = rand_poly(P, 2, 3, &mut rng);
    let c = Circuit::from_polys(P, 2, std::slice::from_ref(&f));
    let m = Matrix::from_rows(vec![vec![Fp::new(2, P), Fp::new(1, P)], vec![Fp::new(0, P), Fp::new(5, P)]], &Fp::zero(P));
    let g = compose_linear(&c, &m).unwrap();
    let y = [Fp::new(3, P), Fp::new(4, P)];
    let x = m.mul_vec(&y);
    assert_eq!(g.eval_fp(&y).unwrap()[0], f.eval(&x));
}

#[test]
fn combinations_keep_square_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = random_circuit(P, RandomSpec { inputs: 2, muls: 3, outputs: 2, max_degree: 3 }, &mut rng);
    let (same, rows) = generic_combinations(&c, 2, &mut rng).unwrap();
    assert_eq!(same, c);
    assert!(rows[0][0].is_one() && rows[0][1].is_zero());
    let over = random_circuit(P, RandomSpec { inputs: 2, muls: 3, outputs: 4, max_degree: 3 }, &mut rng);
    let (mixed, rows) = generic_combinations(&over, 2, &mut rng).unwrap();
    let pt = [Fp::new(9, P), Fp::new(1, P)];
    let vals = over.eval_fp(&pt).unwrap();
    let got = mixed.eval_fp(&pt).unwrap();
    for (row, g) in rows.iter().zip(&got) {
        let want = row.iter().zip(&vals).fold(Fp::zero(P), |a, (r, v)| a.add(&r.mul(v)));
        assert_eq!(*g, want);
    }
    assert!(generic_combinations(&c, 3, &mut rng).is_err());
}

#[test]
fn test_sequence_constants() {
    assert_eq!(omega_for_depth(1), 2 * 9);
    assert_eq!(omega_for_depth(2), 6 * 25);
    assert_eq!(omega_for_depth(4), 30 * 289);
    assert_eq!(sigma_for(2, 5), 6 * 100);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    assert!(matches!(CorrectTestSequence::new(101, 2, 2, 3, &mut rng), Err(Error::FieldTooSmall { p: 101, need: 150 })));
    let cts = CorrectTestSequence::new(P, 2, 2, 3, &mut rng).unwrap();
    assert_eq!(cts.points.len(), 6 * 36);
    assert!(cts.points.iter().flatten().all(|x| u128::from(x.value()) < cts.omega));
}

#[test]
fn identity_test_separates_zero_from_nonzero() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let c = single(P, 2, 3, 4, &mut rng);
        let mut b = Builder::new(P, 2);
        let x = embed(&mut b, &c)[0];
        let y = embed(&mut b, &c)[0];
        let d = b.sub(x, y);
        let zero = b.finish(vec![d]);
        for circ in [&c, &zero] {
            let m = circ.measure();
            if m.depth > 4 {
                continue;
            }
            let cts = CorrectTestSequence::new(P, 2, m.depth, m.size, &mut rng).unwrap();
            let is_zero = circ.dense_expand().unwrap()[0].is_zero();
            assert_eq!(pit_is_zero(circ, &cts).unwrap(), is_zero);
        }
    }
}

#[test]
fn identity_test_rejects_circuits_outside_its_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cts = CorrectTestSequence::new(P, 2, 1, 1, &mut rng).unwrap();
    let c = parse_slp("inputs x y\na = mul x y\nb = mul a a\nout b\n", P).unwrap();
    assert!(matches!(pit_is_zero(&c.circuit, &cts), Err(Error::Hypothesis(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_agrees_with_expansion(seed in any::<u64>(), muls in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(P, RandomSpec { inputs: 3, muls, outputs: 2, max_degree: 5 }, &mut rng);
        let dense = c.dense_expand().unwrap();
        let pt: Vec<Fp> = (0..3).map(|_| Fp::random(P, &mut rng)).collect();
        let vals = c.eval_fp(&pt).unwrap();
        for (f, v) in dense.iter().zip(&vals) {
            prop_assert_eq!(f.eval(&pt), *v);
        }
        let degs = c.syntactic_degrees();
        for (&o, f) in c.outputs().iter().zip(&dense) {
            prop_assert!(f.total_degree() <= i64::from(degs[o].unwrap()));
        }
        prop_assert!(c.measure().size <= muls);
    }
}
