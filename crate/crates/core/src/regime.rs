//! Damping-regime classification from the discriminant `ω² - (λ/2m)²`.

use serde::{Deserialize, Serialize};

use crate::system::OscillatorParams;

/// Default relative tolerance for calling a discriminant critical.
pub const DEFAULT_EPS_CRIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Overdamped,
    Critical,
    Underdamped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingRegime {
    pub regime: Regime,
    /// `ω² - (λ/2m)²`
    pub discriminant: f64,
}

/// Classifies `p` as over-, critically or underdamped.
///
/// The discriminant counts as zero when `|ω² - γ²| <= eps_crit * max(ω², γ²)`
/// with `γ = λ/2m`.
pub fn classify_damping(p: &OscillatorParams, eps_crit: f64) -> DampingRegime {
    let w2 = p.omega * p.omega;
    let g = p.gamma();
    let g2 = g * g;
    let discriminant = w2 - g2;
    let regime = if discriminant.abs() <= eps_crit * w2.max(g2) {
        Regime::Critical
    } else if discriminant < 0.0 {
        Regime::Overdamped
    } else {
        Regime::Underdamped
    };
    DampingRegime {
        regime,
        discriminant,
    }
}
