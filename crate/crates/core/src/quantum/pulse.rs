//! Time series on a uniform grid and the smooth real shapes used for
//! drive envelopes and geometric trajectories.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::C64;

/// Complex samples on a uniform grid `t_k = k T / (len - 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub duration: f64,
    pub values: Vec<C64>,
}

impl Pulse {
    pub fn new(duration: f64, values: Vec<C64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(invalid("a pulse needs at least 2 grid points"));
        }
        if !(duration > 0.0) {
            return Err(invalid(format!("pulse duration must be positive, got {duration}")));
        }
        Ok(Self { duration, values })
    }

    pub fn sample(duration: f64, points: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        let dt = duration / (points.max(2) - 1) as f64;
        Self::new(duration, (0..points).map(|k| f(k as f64 * dt)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.duration / (self.len() - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Pulse {
        Pulse {
            duration: self.duration,
            values: self.values.iter().enumerate().map(|(k, v)| f(self.time(k), *v)).collect(),
        }
    }

    /// Catmull–Rom cubic interpolation; constant extrapolation outside [0, T].
    pub fn value_at(&self, t: f64) -> C64 {
        let n = self.len();
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= self.duration {
            return self.values[n - 1];
        }
        let x = t / self.dt();
        let k = (x.floor() as usize).min(n - 2);
        let s = x - k as f64;
        let p1 = self.values[k];
        let p2 = self.values[k + 1];
        let p0 = if k > 0 { self.values[k - 1] } else { p1 * 2.0 - p2 };
        let p3 = if k + 2 < n { self.values[k + 2] } else { p2 * 2.0 - p1 };
        let s2 = s * s;
        let s3 = s2 * s;
        (p1 * 2.0 + (p2 - p0) * s + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * s2 + (p1 * 3.0 - p0 - p2 * 3.0 + p3) * s3) * 0.5
    }

    /// Fourth-order finite-difference derivative (central in the interior,
    /// one-sided five-point stencils at the edges).
    pub fn derivative(&self) -> Pulse {
        let n = self.len();
        let h = self.dt();
        let v = &self.values;
        let values = if n < 5 {
            (0..n)
                .map(|k| {
                    let (a, b) = if k == 0 { (0, 1) } else if k == n - 1 { (n - 2, n - 1) } else { (k - 1, k + 1) };
                    (v[b] - v[a]) / ((b - a) as f64 * h)
                })
                .collect()
        } else {
            (0..n)
                .map(|k| {
                    if k >= 2 && k + 2 < n {
                        (v[k - 2] - v[k - 1] * 8.0 + v[k + 1] * 8.0 - v[k + 2]) / (12.0 * h)
                    } else if k < 2 {
                        // five-point one-sided stencil anchored at k (k+4 < n guaranteed)
                        (v[k] * -25.0 + v[k + 1] * 48.0 - v[k + 2] * 36.0 + v[k + 3] * 16.0 - v[k + 4] * 3.0) / (12.0 * h)
                    } else {
                        (v[k] * 25.0 - v[k - 1] * 48.0 + v[k - 2] * 36.0 - v[k - 3] * 16.0 + v[k - 4] * 3.0) / (12.0 * h)
                    }
                })
                .collect()
        };
        Pulse {
            duration: self.duration,
            values,
        }
    }

    /// ∫|x|² dt by composite Simpson (trapezoid on the last interval when the
    /// number of intervals is odd).
    pub fn energy(&self) -> f64 {
        let w: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        integrate_samples(&w, self.dt())
    }
}

pub fn integrate_samples(w: &[f64], h: f64) -> f64 {
    let intervals = w.len() - 1;
    let even = intervals - intervals % 2;
    let mut s = 0.0;
    for k in (0..even).step_by(2) {
        s += h / 3.0 * (w[k] + 4.0 * w[k + 1] + w[k + 2]);
    }
    if even < intervals {
        s += h / 2.0 * (w[intervals - 1] + w[intervals]);
    }
    s
}

/// A real, differentiable function on [0, T].
pub trait Trajectory: Send + Sync + fmt::Debug {
    fn duration(&self) -> f64;
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;

    /// ∫₀ᵀ value² dt.
    fn square_integral(&self) -> f64 {
        let n = 8001;
        let h = self.duration() / (n - 1) as f64;
        let w: Vec<f64> = (0..n).map(|k| self.value(k as f64 * h).powi(2)).collect();
        integrate_samples(&w, h)
    }

    fn sample(&self, points: usize) -> Pulse {
        Pulse::sample(self.duration(), points, |t| C64::new(self.value(t), 0.0)).expect("valid trajectory grid")
    }
}

/// Unit-height plateau with sin²-shaped rise and fall of length `ramp`.
/// `ramp = T/2` gives the plain sin²(πt/T) pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatTop {
    pub duration: f64,
    pub ramp: f64,
}

impl FlatTop {
    pub fn new(duration: f64, ramp: f64) -> Result<Self> {
        if !(duration > 0.0) || !(ramp > 0.0) || ramp > duration / 2.0 * (1.0 + 1e-12) {
            return Err(invalid(format!("flat-top needs 0 < ramp <= T/2 (T={duration}, ramp={ramp})")));
        }
        Ok(Self {
            duration,
            ramp: ramp.min(duration / 2.0),
        })
    }

    pub fn sin_squared(duration: f64) -> Self {
        Self {
            duration,
            ramp: duration / 2.0,
        }
    }

    /// Largest |d/dt| of the unit-height shape.
    pub fn max_slope(&self) -> f64 {
        PI / (2.0 * self.ramp)
    }
}

impl Trajectory for FlatTop {
    fn duration(&self) -> f64 {
        self.duration
    }

    fn value(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= self.duration {
            0.0
        } else if t < self.ramp {
            (PI * t / (2.0 * self.ramp)).sin().powi(2)
        } else if t > self.duration - self.ramp {
            (PI * (self.duration - t) / (2.0 * self.ramp)).sin().powi(2)
        } else {
            1.0
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        let k = PI / (2.0 * self.ramp);
        if t <= 0.0 || t >= self.duration {
            0.0
        } else if t < self.ramp {
            k * (PI * t / self.ramp).sin()
        } else if t > self.duration - self.ramp {
            -k * (PI * (self.duration - t) / self.ramp).sin()
        } else {
            0.0
        }
    }

    fn square_integral(&self) -> f64 {
        self.duration - 1.25 * self.ramp
    }
}

/// Trajectory given by samples; derivatives by finite differences.
#[derive(Clone, Debug)]
pub struct SampledTrajectory {
    samples: Pulse,
    slope: Pulse,
}

impl SampledTrajectory {
    pub fn new(samples: Pulse) -> Self {
        let slope = samples.derivative();
        Self { samples, slope }
    }
}

impl Trajectory for SampledTrajectory {
    fn duration(&self) -> f64 {
        self.samples.duration
    }

    fn value(&self, t: f64) -> f64 {
        self.samples.value_at(t).re
    }

    fn derivative(&self, t: f64) -> f64 {
        self.slope.value_at(t).re
    }

    fn square_integral(&self) -> f64 {
        self.samples.energy()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_top_limits_to_sin_squared() {
        let s = FlatTop::sin_squared(10.0);
        for t in [0.3, 2.0, 5.0, 7.7] {
            assert!((s.value(t) - (PI * t / 10.0).sin().powi(2)).abs() < 1e-14);
            assert!((s.derivative(t) - PI / 10.0 * (2.0 * PI * t / 10.0).sin()).abs() < 1e-13);
        }
        assert!((s.square_integral() - 3.75).abs() < 1e-14);
    }

    #[test]
    fn flat_top_square_integral_matches_quadrature() {
        let s = FlatTop::new(20.0, 3.0).unwrap();
        let p = s.sample(20001);
        assert!((p.energy() - s.square_integral()).abs() < 1e-9);
        assert!(FlatTop::new(20.0, 11.0).is_err());
    }

    #[test]
    fn derivative_is_fourth_order() {
        let p = Pulse::sample(2.0, 201, |t| C64::new((3.0 * t).sin(), t * t)).unwrap();
        let d = p.derivative();
        for (k, v) in d.values.iter().enumerate() {
            let t = p.time(k);
            assert!((v - C64::new(3.0 * (3.0 * t).cos(), 2.0 * t)).norm() < 1e-6, "k={k}");
        }
    }

    #[test]
    fn interpolation_hits_nodes() {
        let p = Pulse::sample(1.0, 11, |t| C64::new(t.exp(), 0.0)).unwrap();
        assert!((p.value_at(0.3) - C64::new(0.3f64.exp(), 0.0)).norm() < 1e-14);
        assert!((p.value_at(0.35) - C64::new(0.35f64.exp(), 0.0)).norm() < 1e-4);
    }
}
