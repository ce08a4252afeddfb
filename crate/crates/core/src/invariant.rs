//! Constants of motion `K(x, v, t)` for the forced, resonant and damped
//! oscillator, and the shift construction
//! `K(x, v, t) = K₀(x - α(t), v - α'(t))` that builds them from an autonomous
//! invariant `K₀` and any particular solution `α`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, EvalError};
use crate::gfunc::{CriticalBranch, GFunction, NEAR_CRITICAL_PREFACTOR};
use crate::particular::{
    is_resonant, particular_solution_sinusoidal, ParticularSolution, ResonanceMode,
};
use crate::regime::{Regime, DEFAULT_EPS_CRIT};
use crate::system::{OscillatorParams, SystemTag};

/// How multivalued angle terms (`arctan` in G and in the weak-dissipation
/// form) are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnglePolicy {
    /// Principal `arctan`; the invariant jumps where `x - α(t)` changes sign.
    PrincipalBranch,
    /// Continuous angle tracked along a trajectory through an [`EvalContext`].
    #[default]
    Unwrapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    UndampedNonResonant,
    UndampedResonant,
    DampedExact,
    WeakDissipation,
    Composed,
    AutonomousOnly,
    /// User-supplied closure or constant.
    Custom,
}

/// Which cross term the resonant invariant uses.
///
/// The shift of the energy by the resonant particular solution produces
/// `(v + 2xω²t) cos(ωt)`; the commonly quoted form has `(v + xω²t) cos(ωt)`,
/// which is not conserved. `AsPrinted` exists to demonstrate that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonantForm {
    #[default]
    Conserved,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Warning {
    /// The G prefactor `1/√|ω² - γ²|` exceeds [`NEAR_CRITICAL_PREFACTOR`].
    NearCriticalDamping { prefactor: f64 },
}

/// Options for the damped evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedConfig {
    pub eps_crit: f64,
    pub critical: CriticalBranch,
}

impl Default for DampedConfig {
    fn default() -> Self {
        DampedConfig {
            eps_crit: DEFAULT_EPS_CRIT,
            critical: CriticalBranch::default(),
        }
    }
}

/// Winding state for [`AnglePolicy::Unwrapped`].
///
/// One context belongs to one evaluator walking one trajectory in time order.
#[derive(Debug, Clone, Default)]
pub struct EvalContext {
    last_raw: Option<f64>,
    /// `0` or `±π`, the reduction of the first reading to `(-π/2, π/2]`
    base: f64,
    turns: i64,
    unwrapped: f64,
}

impl EvalContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Continuous version of `atan(y / x)`.
    ///
    /// The first reading is the principal value; later readings are
    /// `atan2(y, x)` plus the same reduction and a whole number of turns, so
    /// rounding does not accumulate along long trajectories.
    fn track(&mut self, y: f64, x: f64) -> f64 {
        let raw = y.atan2(x);
        match self.last_raw {
            None => {
                self.base = if raw > FRAC_PI_2 {
                    -PI
                } else if raw < -FRAC_PI_2 {
                    PI
                } else {
                    0.0
                };
                self.turns = 0;
            }
            Some(prev) => {
                let d = raw - prev;
                if d > PI {
                    self.turns -= 1;
                } else if d <= -PI {
                    self.turns += 1;
                }
            }
        }
        self.last_raw = Some(raw);
        self.unwrapped = raw + (self.base + self.turns as f64 * TAU);
        self.unwrapped
    }

    /// Current tracked angle, if any sample has been seen.
    pub fn angle(&self) -> Option<f64> {
        self.last_raw.map(|_| self.unwrapped)
    }
}

#[derive(Debug, Clone, Copy)]
struct Autonomous {
    m: f64,
    omega: f64,
    lambda: f64,
    /// `None` when λ = 0.
    g: Option<GFunction>,
}

impl Autonomous {
    fn new(p: &OscillatorParams, cfg: DampedConfig) -> Self {
        Autonomous {
            m: p.m,
            omega: p.omega,
            lambda: p.lambda,
            g: (p.lambda > 0.0).then(|| GFunction::new(p, cfg.eps_crit, cfg.critical)),
        }
    }

    fn eval(
        &self,
        x: f64,
        v: f64,
        policy: AnglePolicy,
        ctx: &mut EvalContext,
    ) -> Result<f64, EvalError> {
        let Some(g) = &self.g else {
            return Ok(0.5 * self.m * (v * v + self.omega * self.omega * x * x));
        };
        if x == 0.0 && v == 0.0 {
            return Err(EvalError::Equilibrium);
        }
        let q = v * v + self.lambda / self.m * x * v + self.omega * self.omega * x * x;
        let gv = match (g.regime(), policy) {
            (Regime::Underdamped, AnglePolicy::Unwrapped) => {
                let (num, den) = g.angle_args(x, v);
                let s = g.damped_frequency().unwrap_or(1.0);
                ctx.track(num, den) / s
            }
            _ => g.eval_pair(x, v)?,
        };
        Ok(0.5 * self.m * q * (-self.lambda / self.m * gv).exp())
    }

    fn has_branch_cut(&self) -> bool {
        matches!(self.g.map(|g| g.regime()), Some(Regime::Underdamped))
    }

    fn warnings(&self) -> Vec<Warning> {
        match self.g {
            Some(g)
                if g.regime() != Regime::Critical && g.prefactor() > NEAR_CRITICAL_PREFACTOR =>
            {
                vec![Warning::NearCriticalDamping {
                    prefactor: g.prefactor(),
                }]
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Clone)]
enum Formula {
    Constant(f64),
    Custom(Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>),
    Autonomous(Autonomous),
    NonResonant(OscillatorParams),
    Resonant(OscillatorParams, ResonantForm),
    Damped {
        base: Autonomous,
        ps: ParticularSolution,
    },
    Weak {
        p: OscillatorParams,
        ps: ParticularSolution,
    },
    Composed {
        base: Box<InvariantEvaluator>,
        ps: ParticularSolution,
    },
}

/// A candidate constant of motion together with its evaluation policy.
#[derive(Clone)]
pub struct InvariantEvaluator {
    formula: Formula,
    kind: InvariantKind,
    policy: AnglePolicy,
    normalization: String,
    tag: Option<SystemTag>,
    warnings: Vec<Warning>,
}

impl fmt::Debug for InvariantEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantEvaluator")
            .field("kind", &self.kind)
            .field("policy", &self.policy)
            .field("normalization", &self.normalization)
            .field("system", &self.tag)
            .finish()
    }
}

impl InvariantEvaluator {
    fn build(formula: Formula, kind: InvariantKind, tag: Option<SystemTag>, note: &str) -> Self {
        InvariantEvaluator {
            formula,
            kind,
            policy: AnglePolicy::default(),
            normalization: note.to_string(),
            tag,
            warnings: Vec::new(),
        }
    }

    /// `K ≡ c`, attached to no system.
    pub fn constant(c: f64) -> Self {
        Self::build(Formula::Constant(c), InvariantKind::Custom, None, "")
    }

    /// Wraps an arbitrary `K(x, v, t)`.
    pub fn custom<F>(f: F, tag: Option<SystemTag>) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Formula::Custom(Arc::new(f)), InvariantKind::Custom, tag, "")
    }

    pub fn with_policy(mut self, policy: AnglePolicy) -> Self {
        self.policy = policy;
        if let Formula::Composed { base, .. } = &mut self.formula {
            base.policy = policy;
        }
        self
    }

    pub fn kind(&self) -> InvariantKind {
        self.kind
    }

    pub fn policy(&self) -> AnglePolicy {
        self.policy
    }

    /// Which additive or multiplicative constants were dropped.
    pub fn normalization(&self) -> &str {
        &self.normalization
    }

    /// System this invariant is conserved for.
    pub fn system_tag(&self) -> Option<&SystemTag> {
        self.tag.as_ref()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Magnitude of the terms that grow secularly with `t`; zero unless the
    /// invariant contains a resonant compensator.
    pub fn secular_scale(&self, t: f64) -> f64 {
        match &self.formula {
            Formula::Resonant(p, _) => p.amp * p.amp * t * t / (8.0 * p.m),
            _ => 0.0,
        }
    }

    /// `x - α(t)` if the principal-branch invariant jumps where it changes sign.
    #[allow(clippy::only_used_in_recursion)]
    pub fn branch_offset(&self, x: f64, v: f64, t: f64) -> Option<f64> {
        match &self.formula {
            Formula::Autonomous(a) if a.has_branch_cut() => Some(x),
            Formula::Damped { base, ps } if base.has_branch_cut() => Some(x - ps.alpha(t)),
            Formula::Weak { p, ps } if p.lambda > 0.0 => Some(x - ps.alpha(t)),
            Formula::Composed { base, ps } => {
                base.branch_offset(x - ps.alpha(t), v - ps.beta(t), t)
            }
            _ => None,
        }
    }

    /// Evaluates with a fresh context, i.e. the principal branch (or, for
    /// `Unwrapped`, its continuous extension onto `x - α = 0`).
    pub fn eval(&self, x: f64, v: f64, t: f64) -> Result<f64, EvalError> {
        self.eval_in(&mut EvalContext::new(), x, v, t)
    }

    /// Evaluates at the next sample of a trajectory, updating the winding state.
    pub fn eval_in(&self, ctx: &mut EvalContext, x: f64, v: f64, t: f64) -> Result<f64, EvalError> {
        let k = match &self.formula {
            Formula::Constant(c) => *c,
            Formula::Custom(f) => f(x, v, t),
            Formula::Autonomous(a) => a.eval(x, v, self.policy, ctx)?,
            Formula::NonResonant(p) => nonresonant(p, x, v, t),
            Formula::Resonant(p, form) => resonant(p, *form, x, v, t),
            Formula::Damped { base, ps } => {
                let (a, b) = ps.shift(t)?;
                base.eval(x - a, v - b, self.policy, ctx)?
            }
            Formula::Weak { p, ps } => {
                let (a, b) = ps.shift(t)?;
                weak(p, x - a, v - b, self.policy, ctx)?
            }
            Formula::Composed { base, ps } => {
                let (a, b) = ps.shift(t)?;
                base.eval_in(ctx, x - a, v - b, t)?
            }
        };
        if k.is_finite() {
            Ok(k)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

// K from the energy shifted by α = -A sin(Ωt) / (m(Ω² - ω²)).
fn nonresonant(p: &OscillatorParams, x: f64, v: f64, t: f64) -> f64 {
    let (m, w, a, cw) = (p.m, p.omega, p.amp, p.cap_omega);
    let detune = cw * cw - w * w;
    let (s, c) = (cw * t).sin_cos();
    0.5 * m * v * v + 0.5 * m * w * w * x * x + a / detune * (cw * v * c + w * w * x * s)
        - a * a / (2.0 * m * detune) * s * s
}

fn resonant(p: &OscillatorParams, form: ResonantForm, x: f64, v: f64, t: f64) -> f64 {
    let (m, w, a) = (p.m, p.omega, p.amp);
    let cross = match form {
        ResonantForm::Conserved => 2.0,
        ResonantForm::AsPrinted => 1.0,
    };
    let (s, c) = (w * t).sin_cos();
    0.5 * m * v * v
        + 0.5 * m * w * w * x * x
        + a / (4.0 * w) * ((v + cross * x * w * w * t) * c - (x * w + 2.0 * v * w * t) * s)
        + a * a * t / (8.0 * m * w) * (w * t - (2.0 * w * t).sin())
}

// First order in λ of the damped invariant, in shifted coordinates.
fn weak(
    p: &OscillatorParams,
    x: f64,
    v: f64,
    policy: AnglePolicy,
    ctx: &mut EvalContext,
) -> Result<f64, EvalError> {
    let (m, w, l) = (p.m, p.omega, p.lambda);
    let e = v * v + w * w * x * x;
    if l == 0.0 {
        return Ok(0.5 * m * e);
    }
    let angle = match policy {
        AnglePolicy::PrincipalBranch => {
            if x == 0.0 {
                return Err(EvalError::BranchCut { offset: x });
            }
            (v / (w * x)).atan()
        }
        AnglePolicy::Unwrapped => ctx.track(v, w * x),
    };
    Ok(0.5 * m * e + 0.5 * l * x * v - l / (2.0 * w) * e * angle)
}

fn require_undamped(p: &OscillatorParams) -> Result<(), Error> {
    p.validate()?;
    if p.lambda != 0.0 {
        return Err(Error::invalid(
            "lambda",
            "must be 0 for an undamped invariant",
        ));
    }
    Ok(())
}

fn require_damped(p: &OscillatorParams) -> Result<(), Error> {
    p.validate()?;
    if p.lambda <= 0.0 {
        return Err(Error::invalid(
            "lambda",
            "must be > 0 for a damped invariant",
        ));
    }
    Ok(())
}

/// The mechanical energy `½mv² + ½mω²x²` of the free oscillator.
pub fn energy(m: f64, omega: f64) -> Result<InvariantEvaluator, Error> {
    let p = OscillatorParams::new(m, omega, 0.0, 0.0, 0.0)?;
    k_autonomous_damped(&p, AnglePolicy::PrincipalBranch)
}

/// `K₀ = (m/2)[v² + (λ/m) x v + ω² x²] exp(-(λ/m) G(v/x))` for the unforced
/// oscillator; the energy when λ = 0. Ignores `amp` and `cap_omega`.
pub fn k_autonomous_damped(
    p: &OscillatorParams,
    policy: AnglePolicy,
) -> Result<InvariantEvaluator, Error> {
    k_autonomous_damped_with(p, policy, DampedConfig::default())
}

pub fn k_autonomous_damped_with(
    p: &OscillatorParams,
    policy: AnglePolicy,
    cfg: DampedConfig,
) -> Result<InvariantEvaluator, Error> {
    p.validate()?;
    let free = p.with_amp(0.0);
    let base = Autonomous::new(&free, cfg);
    let note = if p.lambda > 0.0 {
        "defined up to a positive multiplicative constant (additive constant in G)"
    } else {
        "mechanical energy"
    };
    let mut k = InvariantEvaluator::build(
        Formula::Autonomous(base),
        InvariantKind::AutonomousOnly,
        Some(free.system().tag()),
        note,
    )
    .with_policy(policy);
    k.warnings = base.warnings();
    Ok(k)
}

/// Closed-form invariant of the undamped oscillator driven off resonance.
pub fn k_undamped_forced_nonresonant(
    p: &OscillatorParams,
    eps_res: f64,
) -> Result<InvariantEvaluator, Error> {
    require_undamped(p)?;
    if is_resonant(p, eps_res) {
        return Err(Error::NearResonance {
            omega: p.omega,
            cap_omega: p.cap_omega,
        });
    }
    Ok(InvariantEvaluator::build(
        Formula::NonResonant(*p),
        InvariantKind::UndampedNonResonant,
        Some(p.system().tag()),
        "shifted energy minus the constant A²Ω²/(2m(Ω²-ω²)²)",
    ))
}

/// Closed-form invariant of the undamped oscillator driven at `Ω = ω`.
pub fn k_undamped_forced_resonant(
    p: &OscillatorParams,
    eps_res: f64,
) -> Result<InvariantEvaluator, Error> {
    k_undamped_forced_resonant_with(p, eps_res, ResonantForm::default())
}

pub fn k_undamped_forced_resonant_with(
    p: &OscillatorParams,
    eps_res: f64,
    form: ResonantForm,
) -> Result<InvariantEvaluator, Error> {
    require_undamped(p)?;
    if !is_resonant(p, eps_res) {
        return Err(Error::invalid(
            "cap_omega",
            "must lie in the resonance band for the resonant invariant",
        ));
    }
    let exact = p.with_cap_omega(p.omega);
    Ok(InvariantEvaluator::build(
        Formula::Resonant(exact, form),
        InvariantKind::UndampedResonant,
        Some(exact.system().tag()),
        "shifted energy minus the constant A²/(32mω²)",
    ))
}

/// `K₀` of the damped oscillator shifted by the steady-state response
/// `(α(t), β(t))`.
pub fn k_damped_forced(
    p: &OscillatorParams,
    policy: AnglePolicy,
) -> Result<InvariantEvaluator, Error> {
    k_damped_forced_with(p, policy, DampedConfig::default())
}

pub fn k_damped_forced_with(
    p: &OscillatorParams,
    policy: AnglePolicy,
    cfg: DampedConfig,
) -> Result<InvariantEvaluator, Error> {
    require_damped(p)?;
    let ps = particular_solution_sinusoidal(p, 0.0, ResonanceMode::Auto)?;
    let base = Autonomous::new(p, cfg);
    let mut k = InvariantEvaluator::build(
        Formula::Damped { base, ps },
        InvariantKind::DampedExact,
        Some(p.system().tag()),
        "defined up to a positive multiplicative constant (additive constant in G)",
    )
    .with_policy(policy);
    k.warnings = base.warnings();
    Ok(k)
}

/// First-order expansion of [`k_damped_forced`] in `λ/2mω`; only
/// approximately conserved.
pub fn k_weak_dissipation(
    p: &OscillatorParams,
    policy: AnglePolicy,
) -> Result<InvariantEvaluator, Error> {
    p.validate()?;
    if p.gamma() >= p.omega {
        return Err(Error::invalid(
            "lambda",
            "weak-dissipation form needs λ/2m < ω",
        ));
    }
    let ps = particular_solution_sinusoidal(p, 0.0, ResonanceMode::Auto)?;
    Ok(InvariantEvaluator::build(
        Formula::Weak { p: *p, ps },
        InvariantKind::WeakDissipation,
        Some(p.system().tag()),
        "first order in λ; error O(λ²)",
    )
    .with_policy(policy))
}

/// `(x, v, t) ↦ k0(x - α(t), v - β(t))`.
///
/// `k0` must be an autonomous invariant; `ps` must solve the forced equation
/// for the same `a`, `b`.
pub fn shift_invariant(
    k0: &InvariantEvaluator,
    ps: &ParticularSolution,
) -> Result<InvariantEvaluator, Error> {
    if k0.kind != InvariantKind::AutonomousOnly {
        return Err(Error::NotAutonomous);
    }
    let mut k = InvariantEvaluator::build(
        Formula::Composed {
            base: Box::new(k0.clone()),
            ps: ps.clone(),
        },
        InvariantKind::Composed,
        Some(ps.system_tag().clone()),
        &format!(
            "autonomous invariant ({}) shifted by a {:?} particular solution",
            k0.normalization,
            ps.provenance()
        ),
    )
    .with_policy(k0.policy);
    k.warnings = k0.warnings.clone();
    Ok(k)
}
