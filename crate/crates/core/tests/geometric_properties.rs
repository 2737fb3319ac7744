use std::f64::consts::PI;
use std::sync::Arc;

use cavgate::protocol_a::analytic::{solve_channel_a, ua_phases, DecayModel, DetuningLimit};
use cavgate::protocol_a::design::design_with_shape;
use cavgate::protocol_a::ghz::{ghz_fidelity, ghz_fidelity_statevector};
use cavgate::quantum::channel::DiagonalChannel;
use cavgate::quantum::params::SystemParams;
use cavgate::quantum::pulse::{FlatTop, Trajectory};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0xa11ce),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Asymmetric bump sin²(πt/T)(1 + a t/T); vanishes at both ends.
#[derive(Debug)]
struct Skewed {
    duration: f64,
    skew: f64,
}

impl Trajectory for Skewed {
    fn duration(&self) -> f64 {
        self.duration
    }
    fn value(&self, t: f64) -> f64 {
        let x = t / self.duration;
        (PI * x).sin().powi(2) * (1.0 + self.skew * x)
    }
    fn derivative(&self, t: f64) -> f64 {
        let x = t / self.duration;
        let s = (PI * x).sin();
        let c = (PI * x).cos();
        (2.0 * PI * s * c * (1.0 + self.skew * x) + s * s * self.skew) / self.duration
    }
}

fn max_phase_error(ch: &DiagonalChannel, phases: &[f64]) -> f64 {
    let ideal = DiagonalChannel::unitary(phases);
    let mut worst: f64 = 0.0;
    for n in 0..phases.len() {
        for m in 0..phases.len() {
            worst = worst.max((ch.element(n, m) - ideal.element(n, m)).norm());
        }
    }
    worst
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn lossless_phase_depends_only_on_area(
        theta in 0.1f64..PI,
        delta in 0.2f64..2.0,
        ramp_fraction in 0.05f64..0.5,
        skew in -0.8f64..2.0,
        n in 1usize..5,
    ) {
        let duration = 100.0;
        let params = SystemParams::new(n);
        let shapes: [Arc<dyn Trajectory>; 2] = [
            Arc::new(FlatTop::new(duration, ramp_fraction * duration).unwrap()),
            Arc::new(Skewed { duration, skew }),
        ];
        for shape in shapes {
            let design = design_with_shape(theta, delta, shape, 401).unwrap();
            let sol = solve_channel_a(&design, &params, DetuningLimit::Infinite, DecayModel::Exact).unwrap();
            let err = max_phase_error(&sol.channel, &ua_phases(n, theta));
            prop_assert!(err < 1e-8, "phase error {err:e}");
        }
    }

    #[test]
    fn ghz_routes_agree(n in 2usize..9) {
        let a = ghz_fidelity(n, None).unwrap();
        let b = ghz_fidelity_statevector(n).unwrap();
        prop_assert!((a - 1.0).abs() < 1e-10 && (b - 1.0).abs() < 1e-10);
    }
}

#[test]
fn ua_phases_are_quadratic() {
    let p = ua_phases(4, 0.3);
    for (n, x) in p.iter().enumerate() {
        assert!((x - 0.3 * (n * n) as f64).abs() < 1e-15);
    }
}
