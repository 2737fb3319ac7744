//! Geometric trajectories f(t) with ζ(t) = −δ f(t) + i ḟ(t) and
//! θ = δ ∫ f² dt.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quantum::pulse::{FlatTop, Pulse, Trajectory};

#[derive(Clone, Debug)]
pub struct GeometricPulseDesign {
    /// Shape s(t); the trajectory is f = amplitude · s.
    pub shape: Arc<dyn Trajectory>,
    pub amplitude: f64,
    pub theta: f64,
    pub delta: f64,
    pub grid_points: usize,
}

impl GeometricPulseDesign {
    pub fn duration(&self) -> f64 {
        self.shape.duration()
    }

    pub fn f(&self, t: f64) -> f64 {
        self.amplitude * self.shape.value(t)
    }

    pub fn f_dot(&self, t: f64) -> f64 {
        self.amplitude * self.shape.derivative(t)
    }

    pub fn zeta(&self, t: f64) -> C64 {
        C64::new(-self.delta * self.f(t), self.f_dot(t))
    }

    pub fn f_pulse(&self) -> Pulse {
        Pulse::sample(self.duration(), self.grid_points, |t| C64::new(self.f(t), 0.0)).expect("grid")
    }

    pub fn zeta_pulse(&self) -> Pulse {
        Pulse::sample(self.duration(), self.grid_points, |t| self.zeta(t)).expect("grid")
    }

    /// max_t (δ² f² + ḟ²) = max_t |ζ|² on the grid.
    pub fn max_zeta_sq(&self) -> f64 {
        let dt = self.duration() / (self.grid_points - 1) as f64;
        (0..self.grid_points).map(|k| self.zeta(k as f64 * dt).norm_sqr()).fold(0.0, f64::max)
    }

    /// δ ∫ f² dt evaluated on the grid.
    pub fn realized_theta(&self) -> f64 {
        self.delta * self.f_pulse().energy()
    }
}

pub const DEFAULT_GRID_POINTS: usize = 4001;

/// sin² trajectory f(t) = A sin²(πt/T) with A fixed by δ∫f² = θ.
pub fn design_pulse_a(theta: f64, delta: f64, duration: f64, grid_points: usize) -> Result<GeometricPulseDesign> {
    design_with_shape(theta, delta, Arc::new(FlatTop::sin_squared(duration)), grid_points)
}

/// Scales an arbitrary shape so that δ∫f² = θ, then checks |ζ| < g/2.
pub fn design_with_shape(theta: f64, delta: f64, shape: Arc<dyn Trajectory>, grid_points: usize) -> Result<GeometricPulseDesign> {
    if !(delta > 0.0) {
        return Err(crate::error::invalid(format!("delta must be positive, got {delta}")));
    }
    if !(theta >= 0.0) {
        return Err(crate::error::invalid(format!("theta must be non-negative, got {theta}")));
    }
    if grid_points < 2 {
        return Err(crate::error::invalid("need at least 2 grid points"));
    }
    let design = scaled_design(theta, delta, shape, grid_points);
    let peak = design.max_zeta_sq();
    if peak >= 0.25 {
        return Err(Error::Infeasible(format!(
            "max |zeta|^2 = {peak:.4} reaches g^2/4 at delta = {delta}, T = {}",
            design.duration()
        )));
    }
    Ok(design)
}

/// Scaled design without the invertibility check.
pub fn scaled_design(theta: f64, delta: f64, shape: Arc<dyn Trajectory>, grid_points: usize) -> GeometricPulseDesign {
    let amplitude = (theta / (delta * shape.square_integral())).sqrt();
    GeometricPulseDesign {
        shape,
        amplitude,
        theta,
        delta,
        grid_points,
    }
}

/// Smallest max_t |ζ|² over δ for the sin² shape, together with the δ
/// achieving it. Feasible designs exist at duration T iff the value is < 1/4.
pub fn best_zeta_margin(theta: f64, duration: f64) -> (f64, f64) {
    let shape = FlatTop::sin_squared(duration);
    let peak = |delta: f64| {
        let a2 = theta / (delta * shape.square_integral());
        (0..=400)
            .map(|k| {
                let t = duration * k as f64 / 400.0;
                a2 * (delta * delta * shape.value(t).powi(2) + shape.derivative(t).powi(2))
            })
            .fold(0.0, f64::max)
    };
    // max |ζ|² ~ a/δ + bδ: unimodal in log δ.
    let (x, v) = crate::optimize::golden_section(|x| peak(x.exp()), (1e-4f64).ln(), (1e3f64).ln(), 1e-10);
    (x.exp(), v)
}

/// Shortest sin² duration for which some δ gives a feasible design.
pub fn min_feasible_duration(theta: f64) -> f64 {
    crate::optimize::bisect(|t| best_zeta_margin(theta, t).1 - 0.25, 0.1, 1e3, 1e-10).unwrap_or(f64::NAN)
}

/// CZ working point of the sin² design: θ = π/2.
pub const CZ_THETA: f64 = PI / 2.0;
