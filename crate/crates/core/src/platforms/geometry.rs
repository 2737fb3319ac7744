//! Fabry–Pérot cavity parameters from mirror geometry.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    #[serde(rename = "wavelength_m")]
    pub wavelength: f64,
    pub finesse: f64,
    #[serde(rename = "waist_m")]
    pub waist: f64,
    #[serde(rename = "length_m")]
    pub length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityRates {
    pub cooperativity: f64,
    /// Angular frequencies.
    pub g: f64,
    pub kappa: f64,
}

/// C = 3λ²F/(2π³w²), g = √(3λ²cγ/(2π²w²L)), κ = πc/(LF) for an atomic
/// linewidth γ (angular, FWHM).
pub fn cavity_from_geometry(geom: &CavityGeometry, gamma: f64) -> CavityRates {
    let CavityGeometry {
        wavelength: lambda,
        finesse,
        waist,
        length,
    } = *geom;
    let l2 = lambda * lambda;
    let w2 = waist * waist;
    CavityRates {
        cooperativity: 3.0 * l2 * finesse / (2.0 * PI.powi(3) * w2),
        g: (3.0 * l2 * SPEED_OF_LIGHT * gamma / (2.0 * PI * PI * w2 * length)).sqrt(),
        kappa: PI * SPEED_OF_LIGHT / (length * finesse),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn rb() -> CavityGeometry {
        CavityGeometry {
            wavelength: 780e-9,
            finesse: 2e5,
            waist: 2e-6,
            length: 40e-6,
        }
    }

    #[test]
    fn fiber_cavity_numbers() {
        let r = cavity_from_geometry(&rb(), TAU * 6e6);
        assert!((r.cooperativity / 1500.0 - 1.0).abs() < 0.1);
        assert!((r.g / (TAU * 400e6) - 1.0).abs() < 0.1);
        assert!((r.kappa / (TAU * 20e6) - 1.0).abs() < 0.1);
    }

    #[test]
    fn cooperativity_is_g_squared_over_rates() {
        let gamma = TAU * 6e6;
        let r = cavity_from_geometry(&rb(), gamma);
        assert!((r.g * r.g / (gamma * r.kappa) / r.cooperativity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finesse_scaling() {
        let a = cavity_from_geometry(&rb(), 1.0);
        let b = cavity_from_geometry(&CavityGeometry { finesse: 4e5, ..rb() }, 1.0);
        assert!((b.cooperativity / a.cooperativity - 2.0).abs() < 1e-12);
        assert!((b.kappa / a.kappa - 0.5).abs() < 1e-12);
        assert_eq!(a.g, b.g);
    }
}
