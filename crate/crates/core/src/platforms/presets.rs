//! Physical platform parameters. All rates are angular frequencies (rad/s),
//! all times are seconds.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::platforms::geometry::CavityGeometry;
use crate::quantum::params::SystemParams;

const PRESET_TABLE: &str = include_str!("../../data/presets.json");

#[derive(Deserialize)]
struct Table {
    version: u32,
    presets: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    name: String,
    g_hz: Option<f64>,
    gamma_hz: Option<f64>,
    kappa_hz: Option<f64>,
    cooperativity: Option<f64>,
    transition_hz: Option<f64>,
    quality_factor: Option<f64>,
    e_lifetime_s: Option<f64>,
    one_state_lifetime_s: Option<f64>,
    t2_star_s: Option<f64>,
    geometry: Option<CavityGeometry>,
    notes: String,
    citation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlatformPreset {
    pub name: String,
    pub g: f64,
    pub gamma: f64,
    pub kappa: f64,
    /// g²/(γκ); `None` when γ = 0.
    pub cooperativity: Option<f64>,
    /// ω_e of the |1⟩ ↔ |e⟩ transition.
    pub transition_frequency: Option<f64>,
    pub quality_factor: Option<f64>,
    pub t2_star: Option<f64>,
    pub one_state_lifetime: Option<f64>,
    pub geometry: Option<CavityGeometry>,
    pub notes: String,
    pub citation: String,
}

impl Entry {
    fn resolve(self) -> Result<PlatformPreset> {
        let name = self.name;
        let omega = self.transition_hz.map(|f| TAU * f);
        let kappa = match (self.kappa_hz, omega, self.quality_factor) {
            (Some(k), _, _) => Some(TAU * k),
            (None, Some(w), Some(q)) => Some(w / q),
            _ => None,
        };
        let mut g = self.g_hz.map(|f| TAU * f);
        let mut gamma = self.gamma_hz.map(|f| TAU * f);
        match (g, gamma, kappa, self.cooperativity) {
            (None, Some(gm), Some(k), Some(c)) => g = Some((c * gm * k).sqrt()),
            (Some(gg), None, Some(k), Some(c)) => gamma = Some(gg * gg / (c * k)),
            _ => {}
        }
        if gamma.is_none() {
            gamma = self.e_lifetime_s.map(|t| 1.0 / t);
        }
        let (g, gamma, kappa) = match (g, gamma, kappa) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(invalid(format!("preset `{name}` does not determine g, gamma and kappa"))),
        };
        let cooperativity = (gamma > 0.0 && kappa > 0.0).then(|| g * g / (gamma * kappa));
        if let (Some(stated), Some(c)) = (self.cooperativity, cooperativity) {
            if ((c - stated) / stated).abs() > 1e-6 {
                return Err(invalid(format!("preset `{name}`: C = {c} disagrees with the stated {stated}")));
            }
        }
        Ok(PlatformPreset {
            name,
            g,
            gamma,
            kappa,
            cooperativity,
            transition_frequency: omega,
            quality_factor: self.quality_factor,
            t2_star: self.t2_star_s,
            one_state_lifetime: self.one_state_lifetime_s,
            geometry: self.geometry,
            notes: self.notes,
            citation: self.citation,
        })
    }
}

impl PlatformPreset {
    pub fn gamma_over_kappa(&self) -> f64 {
        self.gamma / self.kappa
    }

    pub fn to_g_time(&self, seconds: f64) -> f64 {
        seconds * self.g
    }

    pub fn from_g_time(&self, t: f64) -> f64 {
        t / self.g
    }

    pub fn to_g_rate(&self, omega: f64) -> f64 {
        omega / self.g
    }

    pub fn from_g_rate(&self, x: f64) -> f64 {
        x * self.g
    }

    /// Γ₁ = 1/τ₁ in units of g.
    pub fn one_decay_g(&self) -> Option<f64> {
        self.one_state_lifetime.map(|t| self.to_g_rate(1.0 / t))
    }

    /// Dimensionless parameters; the |1⟩ decay and T₂* are carried along.
    pub fn system_params(&self, n_qubits: usize) -> SystemParams {
        let mut p = SystemParams::new(n_qubits).with_rates(self.to_g_rate(self.gamma), self.to_g_rate(self.kappa));
        p.extra_one_decay = self.one_decay_g();
        p.dephasing_time = self.t2_star.map(|t| self.to_g_time(t));
        p
    }
}

fn table() -> Result<Vec<PlatformPreset>> {
    let t: Table = serde_json::from_str(PRESET_TABLE)?;
    if t.version != 1 {
        return Err(invalid(format!("unsupported preset table version {}", t.version)));
    }
    t.presets.into_iter().map(Entry::resolve).collect()
}

pub fn presets() -> Vec<PlatformPreset> {
    table().expect("bundled preset table is valid")
}

pub fn preset_names() -> Vec<String> {
    presets().into_iter().map(|p| p.name).collect()
}

pub fn preset(name: &str) -> Result<PlatformPreset> {
    presets().into_iter().find(|p| p.name == name).ok_or_else(|| Error::Unknown {
        kind: "platform",
        name: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn table_resolves() {
        assert_eq!(preset_names(), vec!["rb_optical", "rydberg_microwave", "polar_molecule", "fluxonium"]);
        assert!(matches!(preset("trapped_ion"), Err(Error::Unknown { kind: "platform", .. })));
    }

    #[test]
    fn stated_values() {
        let rb = preset("rb_optical").unwrap();
        assert!(rel(rb.gamma_over_kappa(), 0.3) < 1e-12);
        assert!(rel(rb.cooperativity.unwrap(), 1500.0) < 1e-12);

        let ry = preset("rydberg_microwave").unwrap();
        assert!(rel(ry.cooperativity.unwrap(), 5e9) < 1e-12);
        assert!(rel(ry.g, TAU * 4e6) < 1e-12);
        assert!((ry.gamma_over_kappa() - 12.0).abs() < 1.0);
        // κ = ω_e/Q is consistent with the stated 17 Hz.
        assert!(rel(ry.transition_frequency.unwrap() / ry.quality_factor.unwrap(), ry.kappa) < 0.02);

        let pm = preset("polar_molecule").unwrap();
        assert_eq!(pm.gamma, 0.0);
        assert_eq!(pm.cooperativity, None);
        assert!(rel(pm.transition_frequency.unwrap() / pm.quality_factor.unwrap(), pm.kappa) < 0.01);

        let fx = preset("fluxonium").unwrap();
        assert_eq!(fx.t2_star, Some(20e-6));
        assert!(rel(fx.gamma, 2e5) < 1e-12);
        assert!(rel(fx.g, TAU * 1e7) < 1e-12);
    }

    #[test]
    fn cooperativity_matches_rates() {
        for p in presets() {
            if let Some(c) = p.cooperativity {
                assert!(rel(p.g * p.g / (p.gamma * p.kappa), c) < 1e-6, "{}", p.name);
            }
        }
    }

    #[test]
    fn unit_round_trip() {
        for p in presets() {
            for x in [1e-9, 3.7e-6, 0.2] {
                assert!(rel(p.from_g_time(p.to_g_time(x)), x) < 1e-12);
                assert!(rel(p.from_g_rate(p.to_g_rate(x * 1e9)), x * 1e9) < 1e-12);
            }
        }
    }

    #[test]
    fn dimensionless_parameters() {
        let ry = preset("rydberg_microwave").unwrap();
        let s = ry.system_params(2);
        assert!(rel(s.cooperativity(), 5e9) < 1e-9);
        assert!(rel(s.one_decay(), 1.0 / (2e-3 * ry.g)) < 1e-12);
        let fx = preset("fluxonium").unwrap().system_params(2);
        assert!(rel(fx.dephasing_time.unwrap(), 20e-6 * TAU * 1e7) < 1e-12);
    }
}
