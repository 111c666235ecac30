mod common;

use common::{ctx30, scalars, Example, EXAMPLE_1, EXAMPLE_2, EXAMPLE_3};
use multiroots::{
    check_theorem1, solve, step_general, Floors, RootState, Scalar, SolveConfig, SolveResult,
    SolveStatus,
};
use proptest::prelude::*;

fn config() -> SolveConfig {
    let ctx = ctx30();
    SolveConfig::new(ctx).with_tolerance(ctx.parse("1e-20").unwrap())
}

fn run(example: &Example, multiplicities: &[u32], initial: &[Scalar]) -> SolveResult {
    let spec = example.spec(&ctx30());
    solve(&spec, multiplicities, initial, &config()).unwrap()
}

fn examples() -> [&'static Example; 3] {
    [&EXAMPLE_1, &EXAMPLE_2, &EXAMPLE_3]
}

#[test]
fn identical_inputs_give_identical_traces() {
    let ctx = ctx30();
    for example in examples() {
        let initial = scalars(&ctx, example.initial);
        let a = run(example, example.multiplicities, &initial);
        let b = run(example, example.multiplicities, &initial);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.roots, b.roots);
    }
}

#[test]
fn every_row_follows_from_the_previous_row_alone() {
    let ctx = ctx30();
    let floors = Floors::for_context(&ctx);
    for example in examples() {
        let spec = example.spec(&ctx);
        let result = run(
            example,
            example.multiplicities,
            &scalars(&ctx, example.initial),
        );
        for pair in result.trace.rows.windows(2) {
            let state =
                RootState::new(pair[0].values.clone(), example.multiplicities.to_vec()).unwrap();
            // reversed order: nothing computed earlier in the sweep may leak in
            for i in (0..state.len()).rev() {
                let next = step_general(&spec, i, &state, &floors).unwrap();
                assert_eq!(
                    next, pair[1].values[i],
                    "{} k={} i={i}",
                    example.name, pair[1].k
                );
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn permuting_the_inputs_permutes_every_row() {
    let ctx = ctx30();
    let ulp_scale = ctx.pow10(-27);
    for example in examples() {
        let initial = scalars(&ctx, example.initial);
        let base = run(example, example.multiplicities, &initial);
        for perm in permutations(initial.len()) {
            let init_p: Vec<Scalar> = perm.iter().map(|&j| initial[j].clone()).collect();
            let mult_p: Vec<u32> = perm.iter().map(|&j| example.multiplicities[j]).collect();
            let permuted = run(example, &mult_p, &init_p);
            assert_eq!(permuted.status, base.status);
            assert_eq!(permuted.trace.rows.len(), base.trace.rows.len());
            for (row_p, row) in permuted.trace.rows.iter().zip(&base.trace.rows) {
                for (slot, &j) in perm.iter().enumerate() {
                    assert!((&row_p.values[slot] - &row.values[j]).abs() <= ulp_scale);
                }
            }
        }
    }
}

fn certified_bound(c: f64, q: f64, k: usize) -> f64 {
    c * q.powf(3f64.powi(k as i32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn starts_in_the_certified_ball_stay_inside_the_error_law(
        offsets in prop::collection::vec(-0.15f64..=0.15, 3)
    ) {
        let ctx = ctx30();
        let roots = scalars(&ctx, EXAMPLE_1.roots);
        let (c, q) = (ctx.parse("0.3").unwrap(), ctx.parse("0.5").unwrap());
        prop_assert!(check_theorem1(&roots, EXAMPLE_1.multiplicities, 6, &c, &q).satisfied);
        let initial: Vec<Scalar> = roots.iter().zip(&offsets).map(|(r, &o)| r + &ctx.from_f64(o)).collect();
        let result = run(&EXAMPLE_1, EXAMPLE_1.multiplicities, &initial);
        prop_assert_eq!(result.status, SolveStatus::Converged);
        for row in &result.trace.rows {
            let err = row.values.iter().zip(&roots).map(|(x, r)| (x - r).abs().to_f64()).fold(0.0, f64::max);
            prop_assert!(err <= certified_bound(0.3, 0.5, row.k), "k={} err={err:e}", row.k);
        }
    }
}
