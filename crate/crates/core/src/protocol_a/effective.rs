//! Dressed-state parameters of the strongly driven |1⟩–|e⟩ transition.

use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::quantum::params::SystemParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveDriveParams {
    pub zeta: C64,
    pub gamma_1: f64,
    pub gamma_e: f64,
    pub eps_1: f64,
    pub eps_e: f64,
    pub lambda_angle: f64,
    pub mu_angle: f64,
}

/// Evaluates ε_{e/1}, ζ, γ_{e/1}, λ and μ at cavity displacement α.
pub fn effective_drive_params(alpha: C64, params: &SystemParams) -> EffectiveDriveParams {
    let g = params.g;
    let big = params.transition_detuning;
    let coupling_sq = 4.0 * g * g * alpha.norm_sqr();
    let root = (big * big + coupling_sq).sqrt();
    let zeta = if root > 0.0 { alpha * (g * g / root) } else { C64::default() };
    // 1 − √(1 − 4|ζ|²/g²) = 1 − |Δ|/root, written without cancellation.
    let (one_minus, cos_lambda) = if root > 0.0 {
        (coupling_sq / (root * (root + big.abs())), big / root)
    } else {
        (0.0, 1.0)
    };
    let gamma_1 = params.gamma / 2.0 * one_minus;
    let gamma_e = params.gamma - gamma_1;
    EffectiveDriveParams {
        zeta,
        gamma_1,
        gamma_e,
        eps_1: (big - root) / 2.0,
        eps_e: (big + root) / 2.0,
        lambda_angle: cos_lambda.clamp(-1.0, 1.0).acos(),
        mu_angle: if alpha.norm() > 0.0 { alpha.arg() } else { 0.0 },
    }
}

/// γ₁ as a function of ζ alone (exact).
pub fn gamma_1_of_zeta(zeta: C64, params: &SystemParams) -> f64 {
    let x = 4.0 * zeta.norm_sqr() / (params.g * params.g);
    params.gamma / 2.0 * x / (1.0 + (1.0 - x).max(0.0).sqrt())
}

/// γ₁ in the weak-ζ limit, γ|ζ|²/g².
pub fn gamma_1_small_drive(zeta: C64, params: &SystemParams) -> f64 {
    params.gamma * zeta.norm_sqr() / (params.g * params.g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(big: f64) -> SystemParams {
        SystemParams::new(1).with_rates(0.7, 0.1).with_detunings(0.3, big)
    }

    #[test]
    fn undriven_limit() {
        let e = effective_drive_params(C64::default(), &params(3.0));
        assert_eq!(e.zeta, C64::default());
        assert_eq!(e.gamma_1, 0.0);
        assert_eq!(e.gamma_e, 0.7);
        assert_eq!(e.lambda_angle, 0.0);
        assert_eq!(e.mu_angle, 0.0);
    }

    #[test]
    fn strong_drive_splits_decay_evenly() {
        let p = params(1.0);
        let e = effective_drive_params(C64::new(0.5e6, 0.0), &p);
        assert!((e.gamma_1 - 0.35).abs() < 1e-6 && (e.gamma_e - 0.35).abs() < 1e-6);
        assert!((e.zeta.norm() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn consistent_with_zeta_form() {
        let p = params(-2.5);
        let alpha = C64::new(0.8, -1.3);
        let e = effective_drive_params(alpha, &p);
        assert!((e.gamma_1 - gamma_1_of_zeta(e.zeta, &p)).abs() < 1e-15);
        assert!((e.eps_e - e.eps_1 - (2.5f64.powi(2) + 4.0 * alpha.norm_sqr()).sqrt()).abs() < 1e-13);
        assert!((e.lambda_angle.cos() - (-2.5) / (2.5f64.powi(2) + 4.0 * alpha.norm_sqr()).sqrt()).abs() < 1e-14);
        assert!((e.mu_angle - alpha.arg()).abs() < 1e-15);
    }
}
