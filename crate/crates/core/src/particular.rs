//! Particular solutions `α(t)` of `α'' = a α + b α' + f(t)`, the time-dependent
//! shift that turns autonomous invariants into invariants of the forced system.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::DenseSolution;
use crate::error::{Error, EvalError};
use crate::system::{ForcedLinearSystem, OscillatorParams, SystemTag};

/// Default relative width of the resonance band `|Ω - ω| <= eps_res ω`.
pub const DEFAULT_EPS_RES: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedFormNonResonant,
    ClosedFormResonant,
    ClosedFormDamped,
    Numeric,
}

/// How [`particular_solution_sinusoidal`] treats undamped forcing inside the
/// resonance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResonanceMode {
    /// Switch to the secular closed form inside the band.
    #[default]
    Auto,
    /// Insist on the non-resonant form; fail inside the band.
    NonResonant,
}

pub fn is_resonant(p: &OscillatorParams, eps_res: f64) -> bool {
    p.lambda == 0.0 && (p.cap_omega - p.omega).abs() <= eps_res * p.omega
}

#[derive(Clone)]
enum Shape {
    NonResonant(OscillatorParams),
    Resonant(OscillatorParams),
    Damped(OscillatorParams),
    Numeric(Arc<DenseSolution>),
}

/// `α(t)` together with `β = α'` and `α''`.
#[derive(Clone)]
pub struct ParticularSolution {
    shape: Shape,
    tag: SystemTag,
}

impl fmt::Debug for ParticularSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParticularSolution")
            .field("provenance", &self.provenance())
            .field("system", &self.tag)
            .finish()
    }
}

/// Closed-form particular solution of the sinusoidally driven oscillator.
///
/// Undamped and off resonance: `α = -A sin(Ωt) / (m(Ω² - ω²))`. Undamped and
/// resonant: `α = (A/4mω²) sin(ωt) - (A/2mω) t cos(ωt)`. Damped:
/// `α = (A/m)/D [(ω² - Ω²) sin(Ωt) - (λΩ/m) cos(Ωt)]` with
/// `D = (λΩ/m)² + (ω² - Ω²)²`.
pub fn particular_solution_sinusoidal(
    p: &OscillatorParams,
    eps_res: f64,
    mode: ResonanceMode,
) -> Result<ParticularSolution, Error> {
    p.validate()?;
    let shape = if p.lambda > 0.0 {
        Shape::Damped(*p)
    } else if is_resonant(p, eps_res) {
        match mode {
            ResonanceMode::Auto => Shape::Resonant(*p),
            ResonanceMode::NonResonant => {
                return Err(Error::NearResonance {
                    omega: p.omega,
                    cap_omega: p.cap_omega,
                })
            }
        }
    } else {
        Shape::NonResonant(*p)
    };
    Ok(ParticularSolution {
        shape,
        tag: p.system().tag(),
    })
}

/// `β(t) = α'(t)` for the oscillator, using the same expression as the
/// particular solution's own `beta`.
pub fn beta_closed_form(t: f64, p: &OscillatorParams) -> f64 {
    if p.amp == 0.0 {
        return 0.0;
    }
    if p.lambda > 0.0 {
        damped::beta(p, t)
    } else if is_resonant(p, DEFAULT_EPS_RES) {
        resonant::beta(p, t)
    } else {
        nonresonant::beta(p, t)
    }
}

impl ParticularSolution {
    pub(crate) fn numeric(dense: DenseSolution) -> Self {
        let tag = dense.system().tag();
        ParticularSolution {
            shape: Shape::Numeric(Arc::new(dense)),
            tag,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self.shape {
            Shape::NonResonant(_) => Provenance::ClosedFormNonResonant,
            Shape::Resonant(_) => Provenance::ClosedFormResonant,
            Shape::Damped(_) => Provenance::ClosedFormDamped,
            Shape::Numeric(_) => Provenance::Numeric,
        }
    }

    /// The forced system this solves.
    pub fn system_tag(&self) -> &SystemTag {
        &self.tag
    }

    /// Time interval on which the solution is defined.
    pub fn domain(&self) -> (f64, f64) {
        match &self.shape {
            Shape::Numeric(d) => d.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `α(t)`; NaN outside [`domain`](Self::domain).
    pub fn alpha(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::NonResonant(p) => zero_or(p, || nonresonant::alpha(p, t)),
            Shape::Resonant(p) => zero_or(p, || resonant::alpha(p, t)),
            Shape::Damped(p) => zero_or(p, || damped::alpha(p, t)),
            Shape::Numeric(d) => d.alpha(t),
        }
    }

    pub fn beta(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::NonResonant(p) => zero_or(p, || nonresonant::beta(p, t)),
            Shape::Resonant(p) => zero_or(p, || resonant::beta(p, t)),
            Shape::Damped(p) => zero_or(p, || damped::beta(p, t)),
            Shape::Numeric(d) => d.beta(t),
        }
    }

    pub fn alpha_ddot(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::NonResonant(p) => zero_or(p, || nonresonant::alpha_ddot(p, t)),
            Shape::Resonant(p) => zero_or(p, || resonant::alpha_ddot(p, t)),
            Shape::Damped(p) => zero_or(p, || damped::alpha_ddot(p, t)),
            Shape::Numeric(d) => d.alpha_ddot(t),
        }
    }

    /// `(α(t), β(t))`, or an error outside the domain.
    pub fn shift(&self, t: f64) -> Result<(f64, f64), EvalError> {
        let (a, b) = (self.alpha(t), self.beta(t));
        if a.is_finite() && b.is_finite() {
            Ok((a, b))
        } else {
            Err(EvalError::OutOfDomain { t })
        }
    }

    /// `α'' - a α - b β - f(t)` against `system`.
    pub fn residual(&self, system: &ForcedLinearSystem, t: f64) -> f64 {
        self.alpha_ddot(t) - system.accel(self.alpha(t), self.beta(t), t)
    }
}

fn zero_or(p: &OscillatorParams, f: impl FnOnce() -> f64) -> f64 {
    if p.amp == 0.0 {
        0.0
    } else {
        f()
    }
}

mod nonresonant {
    use crate::system::OscillatorParams;

    fn coefficient(p: &OscillatorParams) -> f64 {
        p.amp / (p.m * (p.cap_omega * p.cap_omega - p.omega * p.omega))
    }

    pub fn alpha(p: &OscillatorParams, t: f64) -> f64 {
        -coefficient(p) * (p.cap_omega * t).sin()
    }

    pub fn beta(p: &OscillatorParams, t: f64) -> f64 {
        -coefficient(p) * p.cap_omega * (p.cap_omega * t).cos()
    }

    pub fn alpha_ddot(p: &OscillatorParams, t: f64) -> f64 {
        coefficient(p) * p.cap_omega * p.cap_omega * (p.cap_omega * t).sin()
    }
}

// Uses ω for both frequencies.
mod resonant {
    use crate::system::OscillatorParams;

    pub fn alpha(p: &OscillatorParams, t: f64) -> f64 {
        let (a, m, w) = (p.amp, p.m, p.omega);
        let (s, c) = (w * t).sin_cos();
        a / (4.0 * m * w * w) * s - a / (2.0 * m * w) * t * c
    }

    pub fn beta(p: &OscillatorParams, t: f64) -> f64 {
        let (a, m, w) = (p.amp, p.m, p.omega);
        let (s, c) = (w * t).sin_cos();
        -a / (4.0 * m * w) * c + a / (2.0 * m) * t * s
    }

    pub fn alpha_ddot(p: &OscillatorParams, t: f64) -> f64 {
        let (a, m, w) = (p.amp, p.m, p.omega);
        let (s, c) = (w * t).sin_cos();
        3.0 * a / (4.0 * m) * s + a * w / (2.0 * m) * t * c
    }
}

mod damped {
    use crate::system::OscillatorParams;

    /// `(A/m) / D`, `ω² - Ω²`, `λΩ/m`
    fn parts(p: &OscillatorParams) -> (f64, f64, f64) {
        let detune = p.omega * p.omega - p.cap_omega * p.cap_omega;
        let friction = p.lambda * p.cap_omega / p.m;
        let d = friction * friction + detune * detune;
        (p.amp / p.m / d, detune, friction)
    }

    pub fn alpha(p: &OscillatorParams, t: f64) -> f64 {
        let (k, detune, friction) = parts(p);
        let (s, c) = (p.cap_omega * t).sin_cos();
        k * (detune * s - friction * c)
    }

    pub fn beta(p: &OscillatorParams, t: f64) -> f64 {
        let (k, detune, friction) = parts(p);
        let (s, c) = (p.cap_omega * t).sin_cos();
        k * p.cap_omega * (detune * c + friction * s)
    }

    pub fn alpha_ddot(p: &OscillatorParams, t: f64) -> f64 {
        -p.cap_omega * p.cap_omega * alpha(p, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn params(m: f64, amp: f64, omega: f64, cap_omega: f64, lambda: f64) -> OscillatorParams {
        OscillatorParams::new(m, omega, lambda, amp, cap_omega).unwrap()
    }

    fn auto(p: &OscillatorParams) -> ParticularSolution {
        particular_solution_sinusoidal(p, DEFAULT_EPS_RES, ResonanceMode::Auto).unwrap()
    }

    fn sample_times(n: usize, t_end: f64) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| t_end * i as f64 / (n - 1) as f64)
    }

    #[test]
    fn nonresonant_example() {
        let p = params(1.0, 1.0, 1.0, 2.0, 0.0);
        let ps = auto(&p);
        assert_eq!(ps.provenance(), Provenance::ClosedFormNonResonant);
        let sys = p.system();
        for t in sample_times(100, 10.0) {
            assert_abs_diff_eq!(ps.alpha(t), -(2.0 * t).sin() / 3.0, epsilon = 1e-15);
            // α'' + ω²α - (A/m) sin(Ωt)
            let r = ps.alpha_ddot(t) + ps.alpha(t) - (2.0 * t).sin();
            assert!(r.abs() <= 1e-12);
            assert!(ps.residual(&sys, t).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_forcing_gives_zero_solution() {
        for lambda in [0.0, 0.4] {
            for cap in [0.5, 1.0, 3.0] {
                let ps = auto(&params(1.0, 0.0, 1.0, cap, lambda));
                for t in sample_times(20, 30.0) {
                    assert_eq!(ps.alpha(t), 0.0);
                    assert_eq!(ps.beta(t), 0.0);
                    assert_eq!(ps.alpha_ddot(t), 0.0);
                }
            }
        }
    }

    #[test]
    fn resonant_example() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.0);
        let ps = auto(&p);
        assert_eq!(ps.provenance(), Provenance::ClosedFormResonant);
        let sys = p.system();
        for t in sample_times(100, 10.0) {
            let expected = 0.25 * t.sin() - 0.5 * t * t.cos();
            assert_abs_diff_eq!(ps.alpha(t), expected, epsilon = 1e-14);
            assert!(ps.residual(&sys, t).abs() <= 1e-12);
        }
    }

    #[test]
    fn damped_example() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0);
        let ps = auto(&p);
        assert_eq!(ps.provenance(), Provenance::ClosedFormDamped);
        for t in sample_times(100, 10.0) {
            assert_abs_diff_eq!(ps.alpha(t), -t.cos(), epsilon = 1e-15);
            // α'' + α' + α = sin t
            let lhs = ps.alpha_ddot(t) + ps.beta(t) + ps.alpha(t);
            assert_abs_diff_eq!(lhs, t.sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn forced_nonresonant_mode_rejects_band() {
        let p = params(1.0, 1.0, 1.0, 1.0 + 1e-12, 0.0);
        let err = particular_solution_sinusoidal(&p, DEFAULT_EPS_RES, ResonanceMode::NonResonant)
            .unwrap_err();
        assert!(matches!(err, Error::NearResonance { .. }));
        assert_eq!(auto(&p).provenance(), Provenance::ClosedFormResonant);
        // damped systems have no singular denominator
        let damped = params(1.0, 1.0, 1.0, 1.0, 0.1);
        assert!(particular_solution_sinusoidal(
            &damped,
            DEFAULT_EPS_RES,
            ResonanceMode::NonResonant
        )
        .is_ok());
    }

    #[test]
    fn beta_closed_form_examples() {
        let p = params(1.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(beta_closed_form(0.0, &p), 0.0);
        assert_abs_diff_eq!(beta_closed_form(FRAC_PI_2, &p), 1.0, epsilon = 1e-15);
        assert_eq!(beta_closed_form(1.3, &p.with_amp(0.0)), 0.0);
        let ps = auto(&p);
        for t in sample_times(50, 20.0) {
            assert_eq!(beta_closed_form(t, &p), ps.beta(t));
        }
    }

    #[test]
    fn residual_at_thousand_times() {
        let cases = [
            params(1.0, 1.0, 1.0, 2.0, 0.0),
            params(2.0, 3.0, 1.5, 0.7, 0.0),
            params(1.0, 1.0, 1.0, 1.0, 0.0),
            params(0.5, 2.0, 2.0, 2.0, 0.0),
            params(1.0, 1.0, 1.0, 2.0, 0.1),
            params(1.0, 1.0, 1.0, 1.0, 2.0),
            params(3.0, 1.0, 0.5, 4.0, 7.0),
        ];
        for p in cases {
            let ps = auto(&p);
            let sys = p.system();
            for t in sample_times(1000, 100.0) {
                let tol = 1e-10 * sys.forcing.eval(t).abs().max(1.0);
                let r = ps.residual(&sys, t);
                assert!(r.abs() <= tol, "{p:?} t={t} residual={r}");
            }
        }
    }

    #[test]
    fn beta_is_second_order_derivative_of_alpha() {
        for p in [
            params(1.0, 1.0, 1.0, 2.0, 0.0),
            params(1.0, 1.0, 1.0, 1.0, 0.0),
            params(1.0, 1.0, 1.0, 2.0, 0.3),
        ] {
            let ps = auto(&p);
            let t = 1.7;
            let hs = [1e-2, 5e-3, 2.5e-3];
            let errs: Vec<f64> = hs
                .iter()
                .map(|&h| (ps.beta(t) - (ps.alpha(t + h) - ps.alpha(t - h)) / (2.0 * h)).abs())
                .collect();
            let order = crate::verification::least_squares_slope(&hs, &errs).unwrap();
            assert!((order - 2.0).abs() <= 0.2, "order {order}");
        }
    }

    #[test]
    fn damped_reduces_to_undamped() {
        let p = params(1.0, 1.0, 1.0, 2.0, 0.0);
        let d = p.with_lambda(1e-8);
        let (u, w) = (auto(&p), auto(&d));
        for t in sample_times(500, 10.0) {
            assert!((u.alpha(t) - w.alpha(t)).abs() <= 1e-6);
        }
    }
}
