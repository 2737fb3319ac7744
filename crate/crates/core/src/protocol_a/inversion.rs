//! From the geometric trajectory back to the physical drive:
//! ζ → α (dressed-state relation) → η (cavity equation of motion).

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::optimize::bisect;
use crate::protocol_a::design::GeometricPulseDesign;
use crate::quantum::pulse::Pulse;

/// Guard for |ζ| close to g/2 where α diverges.
pub const INVERSION_GUARD: f64 = 1e-9;

/// α with |α| = |ζ||Δ|/(g²√(1 − 4|ζ|²/g²)) and arg α = arg ζ.
pub fn alpha_from_zeta(zeta: C64, big_delta: f64, g: f64) -> std::result::Result<C64, f64> {
    let x = 4.0 * zeta.norm_sqr() / (g * g);
    if zeta.norm() >= g / 2.0 * (1.0 - INVERSION_GUARD) {
        return Err(zeta.norm());
    }
    Ok(zeta * (big_delta.abs() / (g * g * (1.0 - x).sqrt())))
}

/// Closed-form α(t) for the design at detuning Δ.
pub fn alpha_at(design: &GeometricPulseDesign, big_delta: f64, g: f64, t: f64) -> Result<C64> {
    alpha_from_zeta(design.zeta(t), big_delta, g).map_err(|zeta| Error::NotInvertible { time: t, zeta })
}

pub fn invert_to_alpha(design: &GeometricPulseDesign, big_delta: f64, g: f64) -> Result<Pulse> {
    if big_delta == 0.0 {
        return Err(crate::error::invalid("Delta must be non-zero to invert the dressed-state relation"));
    }
    let dt = design.duration() / (design.grid_points - 1) as f64;
    let values = (0..design.grid_points).map(|k| alpha_at(design, big_delta, g, k as f64 * dt)).collect::<Result<Vec<_>>>()?;
    Pulse::new(design.duration(), values)
}

/// η = −α̇ − (iδ + κ/2) α.
pub fn invert_to_eta(alpha: &Pulse, delta: f64, kappa: f64) -> Pulse {
    let d = alpha.derivative();
    let k = C64::new(kappa / 2.0, delta);
    Pulse {
        duration: alpha.duration,
        values: alpha.values.iter().zip(&d.values).map(|(a, da)| -da - k * a).collect(),
    }
}

/// η(t) from the closed-form α(t) with a central-difference derivative.
pub fn eta_at(design: &GeometricPulseDesign, big_delta: f64, g: f64, kappa: f64, t: f64) -> Result<C64> {
    let h = 1e-5 * design.duration();
    let t = t.clamp(h, design.duration() - h);
    let da = (alpha_at(design, big_delta, g, t + h)? - alpha_at(design, big_delta, g, t - h)?) / (2.0 * h);
    Ok(-da - C64::new(kappa / 2.0, design.delta) * alpha_at(design, big_delta, g, t)?)
}

pub fn max_eta(design: &GeometricPulseDesign, big_delta: f64, g: f64, kappa: f64) -> Result<f64> {
    Ok(invert_to_eta(&invert_to_alpha(design, big_delta, g)?, design.delta, kappa).max_abs())
}

/// Δ > 0 such that max_t |η(t)| equals `eta_cap` (bisection, 0.1% target).
pub fn calibrate_delta(design: &GeometricPulseDesign, eta_cap: f64, g: f64, kappa: f64) -> Result<f64> {
    if !(eta_cap > 0.0) {
        return Err(crate::error::invalid("eta_cap must be positive"));
    }
    // Work in log Δ; max|η| grows monotonically with Δ.
    let f = |x: f64| max_eta(design, x.exp(), g, kappa).map(|m| m.ln() - eta_cap.ln()).unwrap_or(f64::NAN);
    let x = bisect(f, (1e-6f64).ln(), (1e9f64).ln(), 1e-8)?;
    Ok(x.exp())
}
