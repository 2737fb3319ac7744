use std::f64::consts::PI;

use cavgate::quantum::params::SystemParams;
use cavgate::synthesis::{build_synthesis_lp, simplex_solve, synthesize, target_cnz, target_phase_rotation, GridSpec, ObjectiveMode};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0xc0ffee),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Minimum over every basic feasible solution (all m-column subsets).
fn vertex_minimum(a: &DMatrix<f64>, b: &[f64], c: &[f64]) -> Option<f64> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let basis = DMatrix::from_fn(m, m, |i, j| a[(i, idx[j])]);
        if basis.determinant().abs() > 1e-10 {
            if let Some(x) = basis.lu().solve(&DVector::from_column_slice(b)) {
                if x.iter().all(|v| *v >= -1e-10) {
                    let cost: f64 = idx.iter().zip(x.iter()).map(|(&j, v)| c[j] * v).sum();
                    best = Some(best.map_or(cost, |bv: f64| bv.min(cost)));
                }
            }
        }
        // Next m-subset in lexicographic order.
        let mut k = m;
        while k > 0 && idx[k - 1] == n - m + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return best;
        }
        idx[k - 1] += 1;
        for j in k..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn arb_lp() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(-1.0f64..1.0, 4 * 20),
        prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], 20),
        prop::collection::vec(0.1f64..2.0, 20),
    )
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn simplex_matches_vertex_enumeration((entries, x0, c) in arb_lp()) {
        let a = DMatrix::from_row_slice(4, 20, &entries);
        let b: Vec<f64> = (a.clone() * DVector::from_column_slice(&x0)).iter().copied().collect();
        let lp = simplex_solve(&a, &b, &c).unwrap();
        let brute = vertex_minimum(&a, &b, &c).expect("x0 is feasible, so a vertex exists");
        prop_assert!((lp.objective - brute).abs() < 1e-9 * brute.abs().max(1.0), "simplex {} vs vertices {}", lp.objective, brute);
        let residual = (a * DVector::from_column_slice(&lp.x) - DVector::from_column_slice(&b)).amax();
        prop_assert!(residual < 1e-9);
        prop_assert!(lp.x.iter().all(|v| *v >= -1e-12));
    }

    #[test]
    fn refining_the_grid_never_hurts(alpha in 0.1f64..3.0, n in 2usize..5, ratio in prop_oneof![Just(0.1), Just(1.0), Just(10.0)]) {
        let params = SystemParams::new(n).with_cooperativity(1e6, ratio);
        let target = target_phase_rotation(alpha, n);
        // half = 16 and half = 31 share every grid point.
        let coarse = synthesize(&target, &params, &GridSpec::default().with_k(32), ObjectiveMode::Average).unwrap();
        let fine = synthesize(&target, &params, &GridSpec::default().with_k(62), ObjectiveMode::Average).unwrap();
        prop_assert!(fine.predicted_infidelity <= coarse.predicted_infidelity * (1.0 + 1e-9) + 1e-15,
            "fine {} > coarse {}", fine.predicted_infidelity, coarse.predicted_infidelity);
    }
}

#[test]
fn nested_grids_share_points() {
    let params = SystemParams::new(3).with_cooperativity(1e6, 1.0);
    let coarse = GridSpec::default().with_k(32).points(&params, 3);
    let fine = GridSpec::default().with_k(62).points(&params, 3);
    for p in &coarse {
        assert!(fine.iter().any(|q| (q.delta - p.delta).abs() < 1e-12 * p.delta.abs().max(1.0)));
    }
}

#[test]
fn lp_columns_are_phase_per_energy() {
    let params = SystemParams::new(3).with_cooperativity(1e6, 1.0);
    let lp = build_synthesis_lp(&target_cnz(3), &params, &GridSpec::default().with_k(16), ObjectiveMode::Uniform).unwrap();
    for (k, wp) in lp.points.iter().enumerate() {
        for n in 0..=3 {
            let expected = -1.0 / (wp.delta - n as f64 * params.g * params.g / wp.big_delta);
            assert!((lp.a[(n, k)] - expected).abs() < 1e-12 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn plans_reproduce_target_phases() {
    let params = SystemParams::new(4).with_cooperativity(1e6, 1.0);
    for (target, mode) in [(target_cnz(4), ObjectiveMode::Uniform), (target_phase_rotation(PI / 4.0, 4), ObjectiveMode::Average)] {
        let plan = synthesize(&target, &params, &GridSpec::default(), mode).unwrap();
        assert!(plan.phase_error() < 1e-8, "{}", plan.phase_error());
    }
}
