//! Time-dependent constants of motion for one-dimensional forced linear systems.
//!
//! A system `x' = v`, `v' = a x + b v + f(t)` inherits a constant of motion
//! from its autonomous part: if `K₀(x, v)` is conserved when `f = 0` and
//! `α(t)` is any particular solution of the forced equation, then
//! `K(x, v, t) = K₀(x - α(t), v - α'(t))` is conserved by the forced flow.
//!
//! The crate provides
//!
//! * [`system`]: the forced linear system and the oscillator parameters
//!   `(m, ω, λ, A, Ω)` that map onto it,
//! * [`particular`]: closed-form particular solutions of the sinusoidally
//!   driven oscillator (off resonance, at resonance, damped),
//! * [`gfunc`] and [`regime`]: the damping-regime function `G` that makes the
//!   damped energy-like quadratic form conserved,
//! * [`invariant`]: closed-form invariants and the generic shift
//!   construction [`invariant::shift_invariant`],
//! * [`dynamics`]: RK4 / Dormand-Prince integration and numerical particular
//!   solutions for arbitrary forcing,
//! * [`verification`]: drift, PDE residuals and refinement studies,
//! * [`cli`]: the batch commands behind the `forced-invariants` binary.
//!
//! ```
//! use forced_invariants::prelude::*;
//!
//! let p = OscillatorParams::new(1.0, 1.0, 0.0, 1.0, 2.0).unwrap();
//! let k = k_undamped_forced_nonresonant(&p, DEFAULT_EPS_RES).unwrap();
//! let grid = TimeGrid::new(0.0, 20.0, 1e-3).unwrap();
//! let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4).unwrap();
//! assert!(drift(&k, &traj).unwrap().max_rel_drift < 1e-7);
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gfunc;
pub mod invariant;
pub mod particular;
pub mod regime;
pub mod system;
pub mod verification;

pub use error::{Error, EvalError};

pub mod prelude {
    pub use crate::dynamics::{
        integrate, particular_solution_numeric, Method, State, TimeGrid, Trajectory,
    };
    pub use crate::error::{Error, EvalError};
    pub use crate::gfunc::{g_function, CriticalBranch, GFunction};
    pub use crate::invariant::{
        energy, k_autonomous_damped, k_damped_forced, k_undamped_forced_nonresonant,
        k_undamped_forced_resonant, k_weak_dissipation, shift_invariant, AnglePolicy, DampedConfig,
        EvalContext, InvariantEvaluator, InvariantKind, ResonantForm,
    };
    pub use crate::particular::{
        beta_closed_form, particular_solution_sinusoidal, ParticularSolution, Provenance,
        ResonanceMode, DEFAULT_EPS_RES,
    };
    pub use crate::regime::{classify_damping, DampingRegime, Regime, DEFAULT_EPS_CRIT};
    pub use crate::system::{ForcedLinearSystem, Forcing, OscillatorParams};
    pub use crate::verification::{
        drift, drift_with, pde_residual, refinement_study, refinement_study_with, residual_study,
        sample_points, DriftOptions, DriftReport, ResidualReport, SampleBox,
    };
}
