use thiserror::Error;

use crate::regime::Regime;
use crate::system::SystemTag;

/// Failure of a single invariant (or G) evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{branch:?} branch of G has a pole at xi = {xi}")]
    GPole { branch: Regime, xi: f64 },
    #[error("state lies on the branch cut of the angle term (x - alpha = {offset:e})")]
    BranchCut { offset: f64 },
    #[error("shifted state is the equilibrium (x - alpha, v - beta) = (0, 0)")]
    Equilibrium,
    #[error("particular solution is not defined at t = {t}")]
    OutOfDomain { t: f64 },
    #[error("invariant evaluated to a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("forcing frequency {cap_omega} lies in the resonance band of omega = {omega}")]
    NearResonance { omega: f64, cap_omega: f64 },
    #[error("invariant must be an autonomous constant of motion to be shifted")]
    NotAutonomous,
    #[error("grid needs {needed} samples, more than the cap of {cap}")]
    StepOverflow { needed: usize, cap: usize },
    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("adaptive step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("invariant was built for {expected:?} but trajectory comes from {found:?}")]
    MetadataMismatch {
        expected: Box<SystemTag>,
        found: Box<SystemTag>,
    },
    #[error("evaluation failed at sample {index} (t = {t}): {source}")]
    Evaluation {
        index: usize,
        t: f64,
        #[source]
        source: EvalError,
    },
    #[error(
        "finite-difference stencil at (x, v, t) = ({x}, {v}, {t}) is too close to a singular locus"
    )]
    SingularProximity { x: f64, v: f64, t: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
