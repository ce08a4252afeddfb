//! Forced linear systems `x' = v`, `v' = a x + b v + f(t)` and the oscillator
//! parameterization that maps onto them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Time-dependent forcing term `f(t)` (an acceleration).
#[derive(Clone)]
pub enum Forcing {
    Zero,
    /// `amplitude * sin(frequency * t)`
    Sine {
        amplitude: f64,
        frequency: f64,
    },
    /// Arbitrary forcing; the label identifies it in trajectory metadata.
    Custom {
        label: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Forcing {
    /// Sinusoidal forcing. A zero amplitude collapses to [`Forcing::Zero`].
    pub fn sine(amplitude: f64, frequency: f64) -> Self {
        if amplitude == 0.0 {
            Forcing::Zero
        } else {
            Forcing::Sine {
                amplitude,
                frequency,
            }
        }
    }

    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Forcing::Custom {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Forcing::Zero => 0.0,
            Forcing::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
            Forcing::Custom { f, .. } => f(t),
        }
    }

    pub fn tag(&self) -> ForcingTag {
        match self {
            Forcing::Zero => ForcingTag::Zero,
            Forcing::Sine {
                amplitude,
                frequency,
            } => ForcingTag::Sine {
                amplitude: *amplitude,
                frequency: *frequency,
            },
            Forcing::Custom { label, .. } => ForcingTag::Custom {
                label: label.clone(),
            },
        }
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tag().fmt(f)
    }
}

/// Comparable description of a forcing term, used for metadata checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ForcingTag {
    Zero,
    Sine { amplitude: f64, frequency: f64 },
    Custom { label: String },
}

/// Comparable description of a whole system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemTag {
    pub a: f64,
    pub b: f64,
    pub forcing: ForcingTag,
}

impl SystemTag {
    /// The same system with the forcing removed.
    pub fn autonomous(&self) -> SystemTag {
        SystemTag {
            a: self.a,
            b: self.b,
            forcing: ForcingTag::Zero,
        }
    }
}

/// `dx/dt = v`, `dv/dt = a x + b v + f(t)`.
#[derive(Clone, Debug)]
pub struct ForcedLinearSystem {
    pub a: f64,
    pub b: f64,
    pub forcing: Forcing,
    origin: Option<OscillatorParams>,
}

impl ForcedLinearSystem {
    pub fn new(a: f64, b: f64, forcing: Forcing) -> Result<Self, Error> {
        if !a.is_finite() {
            return Err(Error::invalid("a", "must be finite"));
        }
        if !b.is_finite() {
            return Err(Error::invalid("b", "must be finite"));
        }
        Ok(ForcedLinearSystem {
            a,
            b,
            forcing,
            origin: None,
        })
    }

    /// `a = -ω²`, `b = -λ/m`, `f(t) = (A/m) sin(Ωt)`.
    pub fn oscillator(p: &OscillatorParams) -> Self {
        ForcedLinearSystem {
            a: -p.omega * p.omega,
            b: -p.lambda / p.m,
            forcing: Forcing::sine(p.amp / p.m, p.cap_omega),
            origin: Some(*p),
        }
    }

    /// Parameters this system was built from, if it came from [`ForcedLinearSystem::oscillator`].
    pub fn oscillator_params(&self) -> Option<&OscillatorParams> {
        self.origin.as_ref()
    }

    /// Same `a`, `b` with the forcing removed.
    pub fn autonomous(&self) -> Self {
        ForcedLinearSystem {
            a: self.a,
            b: self.b,
            forcing: Forcing::Zero,
            origin: self.origin.map(|p| OscillatorParams { amp: 0.0, ..p }),
        }
    }

    #[inline]
    pub fn accel(&self, x: f64, v: f64, t: f64) -> f64 {
        self.a * x + self.b * v + self.forcing.eval(t)
    }

    pub fn tag(&self) -> SystemTag {
        SystemTag {
            a: self.a,
            b: self.b,
            forcing: self.forcing.tag(),
        }
    }
}

/// Physical parameters of the driven, damped oscillator
/// `m x'' = -m ω² x - λ x' + A sin(Ωt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub amp: f64,
    pub cap_omega: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64, lambda: f64, amp: f64, cap_omega: f64) -> Result<Self, Error> {
        let p = OscillatorParams {
            m,
            omega,
            lambda,
            amp,
            cap_omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let check = |name: &'static str, value: f64, ok: bool, rule: &'static str| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::invalid(name, rule))
            }
        };
        check("m", self.m, self.m > 0.0, "must be finite and > 0")?;
        check(
            "omega",
            self.omega,
            self.omega > 0.0,
            "must be finite and > 0",
        )?;
        check(
            "lambda",
            self.lambda,
            self.lambda >= 0.0,
            "must be finite and >= 0",
        )?;
        check("amp", self.amp, true, "must be finite")?;
        check(
            "cap_omega",
            self.cap_omega,
            self.cap_omega >= 0.0,
            "must be finite and >= 0",
        )
    }

    /// Half the damping rate, `λ / 2m`.
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.lambda / (2.0 * self.m)
    }

    pub fn with_amp(self, amp: f64) -> Self {
        OscillatorParams { amp, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        OscillatorParams { lambda, ..self }
    }

    pub fn with_cap_omega(self, cap_omega: f64) -> Self {
        OscillatorParams { cap_omega, ..self }
    }

    pub fn system(&self) -> ForcedLinearSystem {
        ForcedLinearSystem::oscillator(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_mapping() {
        let p = OscillatorParams::new(2.0, 3.0, 0.5, 4.0, 1.5).unwrap();
        let sys = p.system();
        assert_eq!(sys.a, -9.0);
        assert_eq!(sys.b, -0.25);
        assert_eq!(
            sys.forcing.tag(),
            ForcingTag::Sine {
                amplitude: 2.0,
                frequency: 1.5
            }
        );
        assert_eq!(sys.oscillator_params(), Some(&p));
        assert_eq!(sys.accel(1.0, 2.0, 0.0), -9.0 - 0.5);
    }

    #[test]
    fn zero_amplitude_is_unforced() {
        let p = OscillatorParams::new(1.0, 1.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(p.system().tag().forcing, ForcingTag::Zero);
        assert_eq!(
            p.system().tag(),
            p.with_amp(3.0).system().autonomous().tag()
        );
    }

    #[test]
    fn rejects_bad_params() {
        let err = OscillatorParams::new(0.0, 1.0, 0.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("m"));
        assert!(OscillatorParams::new(1.0, -1.0, 0.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -0.1, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.0, f64::NAN, 1.0).is_err());
        assert!(ForcedLinearSystem::new(f64::INFINITY, 0.0, Forcing::Zero).is_err());
    }
}
