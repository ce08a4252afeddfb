//! The regime-dependent function `G(ξ)` inside the damped invariant
//! `K = (m/2)[v² + (λ/m) x v + ω² x²] exp(-(λ/m) G(v/x))`.
//!
//! Along the autonomous flow `ξ = v/x` obeys `ξ' = -(ξ² + 2γξ + ω²)` with
//! `γ = λ/2m`, and the invariant needs `dG/dt = -1`, i.e.
//! `G'(ξ) = 1 / ((ξ + γ)² + ω² - γ²)`. The three branches are the three
//! antiderivatives of that rational function.

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::regime::{classify_damping, Regime, DEFAULT_EPS_CRIT};
use crate::system::OscillatorParams;

/// Branch prefactor above which a damped evaluator reports
/// [`Warning::NearCriticalDamping`](crate::invariant::Warning).
pub const NEAR_CRITICAL_PREFACTOR: f64 = 1e6;

/// Sign convention for the critically damped branch.
///
/// `Printed` is `1/(γ + ξ)`; `Negated` is `-1/(γ + ξ)`, the antiderivative of
/// `1/(ξ + γ)²` and the limit of the overdamped branch. Only `Negated` is
/// conserved along the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalBranch {
    #[default]
    Negated,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFunction {
    gamma: f64,
    regime: Regime,
    /// `sqrt(|ω² - γ²|)`, zero in the critical branch
    root: f64,
    critical: CriticalBranch,
}

impl GFunction {
    pub fn new(p: &OscillatorParams, eps_crit: f64, critical: CriticalBranch) -> Self {
        let r = classify_damping(p, eps_crit);
        let root = match r.regime {
            Regime::Critical => 0.0,
            _ => r.discriminant.abs().sqrt(),
        };
        GFunction {
            gamma: p.gamma(),
            regime: r.regime,
            root,
            critical,
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn critical_branch(&self) -> CriticalBranch {
        self.critical
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `sqrt(ω² - γ²)` for the underdamped branch (the angular frequency of
    /// the free damped motion).
    pub fn damped_frequency(&self) -> Option<f64> {
        (self.regime == Regime::Underdamped).then_some(self.root)
    }

    /// The branch's `1/√|ω² - γ²|`-type prefactor; infinite in the critical branch.
    pub fn prefactor(&self) -> f64 {
        match self.regime {
            Regime::Underdamped => 1.0 / self.root,
            Regime::Overdamped => 1.0 / (2.0 * self.root),
            Regime::Critical => f64::INFINITY,
        }
    }

    /// `G(ξ)` with the principal arctangent in the underdamped branch.
    pub fn eval(&self, xi: f64) -> Result<f64, EvalError> {
        let shifted = self.gamma + xi;
        let pole = || EvalError::GPole {
            branch: self.regime,
            xi,
        };
        let value = match self.regime {
            Regime::Underdamped => (shifted / self.root).atan() / self.root,
            Regime::Critical => {
                if shifted == 0.0 {
                    return Err(pole());
                }
                self.critical_sign() / shifted
            }
            Regime::Overdamped => {
                let num = shifted - self.root;
                let den = shifted + self.root;
                if num == 0.0 || den == 0.0 {
                    return Err(pole());
                }
                (num / den).abs().ln() / (2.0 * self.root)
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(pole())
        }
    }

    /// `G(v/x)` written in terms of the pair `(x, v)`.
    ///
    /// The critical and overdamped branches are continuous across `x = 0`
    /// (both tend to 0 as `ξ → ±∞`), so only the underdamped branch fails
    /// there.
    pub(crate) fn eval_pair(&self, x: f64, v: f64) -> Result<f64, EvalError> {
        let s = self.gamma * x + v;
        let pole = || EvalError::GPole {
            branch: self.regime,
            xi: v / x,
        };
        match self.regime {
            Regime::Underdamped => {
                if x == 0.0 {
                    return Err(EvalError::BranchCut { offset: x });
                }
                Ok((s / (self.root * x)).atan() / self.root)
            }
            Regime::Critical => {
                if s == 0.0 {
                    return Err(pole());
                }
                Ok(self.critical_sign() * x / s)
            }
            Regime::Overdamped => {
                let num = s - self.root * x;
                let den = s + self.root * x;
                if num == 0.0 || den == 0.0 {
                    return Err(pole());
                }
                Ok((num / den).abs().ln() / (2.0 * self.root))
            }
        }
    }

    /// Numerator and denominator of the underdamped arctangent argument,
    /// suitable for `atan2`.
    pub(crate) fn angle_args(&self, x: f64, v: f64) -> (f64, f64) {
        (self.gamma * x + v, self.root * x)
    }

    fn critical_sign(&self) -> f64 {
        match self.critical {
            CriticalBranch::Negated => -1.0,
            CriticalBranch::Printed => 1.0,
        }
    }
}

/// `G(ξ)` for `p` with the default regime tolerance and critical convention.
pub fn g_function(xi: f64, p: &OscillatorParams) -> Result<f64, EvalError> {
    GFunction::new(p, DEFAULT_EPS_CRIT, CriticalBranch::default()).eval(xi)
}
