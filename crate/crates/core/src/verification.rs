//! Numerical certification of constants of motion: drift along integrated
//! trajectories, finite-difference residuals of the transport equation
//! `v ∂ₓK + (a x + b v + f(t)) ∂ᵥK + ∂ₜK = 0`, and step-refinement studies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{integrate, Method, State, TimeGrid, Trajectory};
use crate::error::{Error, EvalError};
use crate::invariant::{AnglePolicy, EvalContext, InvariantEvaluator};
use crate::system::ForcedLinearSystem;

/// Absolute floor of the relative-drift denominator.
pub const DEFAULT_DRIFT_FLOOR: f64 = 1e-12;

/// Relative drift (a few ulps of the drift scale) below which a refinement
/// study cannot resolve the integrator's error.
pub const REFINEMENT_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftOptions {
    pub floor: f64,
    /// Reject trajectories whose system differs from the invariant's.
    pub check_metadata: bool,
}

impl Default for DriftOptions {
    fn default() -> Self {
        DriftOptions {
            floor: DEFAULT_DRIFT_FLOOR,
            check_metadata: true,
        }
    }
}

/// Drift statistics over a run of samples on which the invariant is continuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcReport {
    pub start: usize,
    pub end: usize,
    pub k0: f64,
    pub scale: f64,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    #[serde(skip)]
    pub k_values: Vec<f64>,
    /// Per-sample `|K - k0| / scale` with the scale accumulated up to that sample.
    #[serde(skip)]
    pub rel_drift: Vec<f64>,
    pub k0: f64,
    pub scale: f64,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    /// `max |K/k0 - 1|`, insensitive to multiplicative normalization.
    pub normalized_drift: f64,
    pub order_estimate: Option<f64>,
    pub policy: AnglePolicy,
    pub arcs: Vec<ArcReport>,
}

/// Drift of `invariant` along `trajectory` with default options.
pub fn drift(
    invariant: &InvariantEvaluator,
    trajectory: &Trajectory,
) -> Result<DriftReport, Error> {
    drift_with(invariant, trajectory, &DriftOptions::default())
}

/// Evaluates `K` at every sample and measures its variation.
///
/// Under [`AnglePolicy::Unwrapped`] the winding state is carried through the
/// samples in order. Under [`AnglePolicy::PrincipalBranch`] invariants with a
/// branch cut are split into arcs at sign changes of `x - α(t)`, and drift is
/// measured within each arc.
pub fn drift_with(
    invariant: &InvariantEvaluator,
    trajectory: &Trajectory,
    opts: &DriftOptions,
) -> Result<DriftReport, Error> {
    if opts.check_metadata {
        if let Some(expected) = invariant.system_tag() {
            if *expected != trajectory.meta.system {
                return Err(Error::MetadataMismatch {
                    expected: Box::new(expected.clone()),
                    found: Box::new(trajectory.meta.system.clone()),
                });
            }
        }
    }
    let policy = invariant.policy();
    let split = policy == AnglePolicy::PrincipalBranch;

    let mut ctx = EvalContext::new();
    let mut k_values = Vec::with_capacity(trajectory.len());
    let mut rel_drift = Vec::with_capacity(trajectory.len());
    let mut arcs: Vec<ArcReport> = Vec::new();
    let mut normalized = 0.0f64;
    let mut prev_side: Option<bool> = None;
    let mut running_scale = 0.0f64;

    for (i, (t, State { x, v })) in trajectory.iter().enumerate() {
        let k = invariant
            .eval_in(&mut ctx, x, v, t)
            .map_err(|source| Error::Evaluation {
                index: i,
                t,
                source,
            })?;
        let side = if split {
            invariant.branch_offset(x, v, t).map(|d| d > 0.0)
        } else {
            None
        };
        let new_arc = arcs.is_empty() || (side.is_some() && side != prev_side);
        prev_side = side;
        if new_arc {
            arcs.push(ArcReport {
                start: i,
                end: i,
                k0: k,
                scale: 0.0,
                max_abs_drift: 0.0,
                max_rel_drift: 0.0,
            });
            running_scale = k.abs().max(opts.floor);
        }
        let arc = arcs.last_mut().expect("arc pushed above");
        running_scale = running_scale.max(k.abs()).max(invariant.secular_scale(t));
        let abs = (k - arc.k0).abs();
        arc.end = i;
        arc.scale = running_scale;
        arc.max_abs_drift = arc.max_abs_drift.max(abs);
        if arc.k0 != 0.0 {
            normalized = normalized.max((k / arc.k0 - 1.0).abs());
        }
        k_values.push(k);
        rel_drift.push(abs / running_scale);
    }
    for arc in &mut arcs {
        arc.max_rel_drift = arc.max_abs_drift / arc.scale;
    }
    let first = &arcs[0];
    Ok(DriftReport {
        k0: first.k0,
        scale: first.scale,
        max_abs_drift: arcs.iter().map(|a| a.max_abs_drift).fold(0.0, f64::max),
        max_rel_drift: arcs.iter().map(|a| a.max_rel_drift).fold(0.0, f64::max),
        normalized_drift: normalized,
        order_estimate: None,
        policy,
        arcs,
        k_values,
        rel_drift,
    })
}

/// Central-difference steps: `h max(1, |c|)` in x and v, plain `h` in t
/// (time dependence is oscillatory, so its scale does not grow with `t`).
fn steps_for(h: f64, x: f64, v: f64) -> (f64, f64, f64) {
    (h * x.abs().max(1.0), h * v.abs().max(1.0), h)
}

/// Central-difference residual `v ∂ₓK + (a x + b v + f(t)) ∂ᵥK + ∂ₜK` at
/// `point = (x, v, t)`.
pub fn pde_residual(
    invariant: &InvariantEvaluator,
    system: &ForcedLinearSystem,
    point: (f64, f64, f64),
    h: f64,
) -> Result<f64, Error> {
    let (x, v, t) = point;
    let (hx, hv, ht) = steps_for(h, x, v);
    let near = || Error::SingularProximity { x, v, t };
    if let Some(d) = invariant.branch_offset(x, v, t) {
        if d.abs() < 2.0 * hx {
            return Err(near());
        }
    }
    let k = |x: f64, v: f64, t: f64| invariant.eval(x, v, t).map_err(|_: EvalError| near());
    let dkdx = (k(x + hx, v, t)? - k(x - hx, v, t)?) / (2.0 * hx);
    let dkdv = (k(x, v + hv, t)? - k(x, v - hv, t)?) / (2.0 * hv);
    let dkdt = (k(x, v, t + ht)? - k(x, v, t - ht)?) / (2.0 * ht);
    Ok(v * dkdx + system.accel(x, v, t) * dkdv + dkdt)
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResidual {
    pub x: f64,
    pub v: f64,
    pub t: f64,
    pub residuals: Vec<f64>,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub steps: Vec<f64>,
    pub points: Vec<PointResidual>,
    /// Median of the per-point orders.
    pub order_estimate: Option<f64>,
    pub min_order: Option<f64>,
    pub max_order: Option<f64>,
}

fn check_geometric(steps: &[f64]) -> Result<(), Error> {
    if steps.len() < 3 {
        return Err(Error::invalid("steps", "need at least 3 step sizes"));
    }
    if steps.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::invalid("steps", "step sizes must be finite and > 0"));
    }
    let r = steps[1] / steps[0];
    if steps
        .windows(2)
        .any(|w| ((w[1] / w[0]) / r - 1.0).abs() > 1e-9)
        || r == 1.0
    {
        return Err(Error::invalid(
            "steps",
            "step sizes must form a geometric progression",
        ));
    }
    Ok(())
}

/// Residuals at every point for every step size, with log-log order estimates.
pub fn residual_study(
    invariant: &InvariantEvaluator,
    system: &ForcedLinearSystem,
    points: &[(f64, f64, f64)],
    steps: &[f64],
) -> Result<ResidualReport, Error> {
    check_geometric(steps)?;
    let mut out = Vec::with_capacity(points.len());
    for &(x, v, t) in points {
        let residuals = steps
            .iter()
            .map(|&h| pde_residual(invariant, system, (x, v, t), h))
            .collect::<Result<Vec<_>, _>>()?;
        let mags: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
        out.push(PointResidual {
            x,
            v,
            t,
            order: least_squares_slope(steps, &mags),
            residuals,
        });
    }
    let mut orders: Vec<f64> = out.iter().filter_map(|p| p.order).collect();
    orders.sort_by(|a, b| a.total_cmp(b));
    let median = (!orders.is_empty()).then(|| {
        let n = orders.len();
        if n % 2 == 1 {
            orders[n / 2]
        } else {
            0.5 * (orders[n / 2 - 1] + orders[n / 2])
        }
    });
    Ok(ResidualReport {
        steps: steps.to_vec(),
        points: out,
        order_estimate: median,
        min_order: orders.first().copied(),
        max_order: orders.last().copied(),
    })
}

/// Axis-aligned box for [`sample_points`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub x: (f64, f64),
    pub v: (f64, f64),
    pub t: (f64, f64),
}

/// Draws `n` seeded points in `bounds` whose finite-difference stencil at
/// step `h_max` stays clear of the invariant's singular loci.
pub fn sample_points(
    invariant: &InvariantEvaluator,
    system: &ForcedLinearSystem,
    n: usize,
    seed: u64,
    bounds: SampleBox,
    h_max: f64,
) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n && tries < 1000 * n.max(1) {
        tries += 1;
        let p = (
            rng.gen_range(bounds.x.0..=bounds.x.1),
            rng.gen_range(bounds.v.0..=bounds.v.1),
            rng.gen_range(bounds.t.0..=bounds.t.1),
        );
        let clear = invariant
            .branch_offset(p.0, p.1, p.2)
            .is_none_or(|d| d.abs() > 0.05);
        // a factor-8 stencil also rules out steep neighbourhoods of the poles
        if clear && pde_residual(invariant, system, p, 8.0 * h_max).is_ok() {
            pts.push(p);
        }
    }
    pts
}

/// Slope of `log(values)` against `log(steps)` by least squares; `None`
/// when a value is zero or the fit is degenerate.
pub fn least_squares_slope(steps: &[f64], values: &[f64]) -> Option<f64> {
    if steps.len() != values.len() || steps.len() < 2 {
        return None;
    }
    if values.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return None;
    }
    let n = steps.len() as f64;
    let lx: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRecord {
    pub steps: Vec<f64>,
    pub drifts: Vec<f64>,
    pub slope: Option<f64>,
    /// The smallest step's drift sits at or below [`REFINEMENT_FLOOR`].
    pub inconclusive: bool,
}

/// Drift at each step size for trajectories produced by `make`, with the
/// log-log slope of drift against step.
pub fn refinement_study_with<F>(
    invariant: &InvariantEvaluator,
    steps: &[f64],
    opts: &DriftOptions,
    mut make: F,
) -> Result<ConvergenceRecord, Error>
where
    F: FnMut(f64) -> Result<Trajectory, Error>,
{
    check_geometric(steps)?;
    let mut drifts = Vec::with_capacity(steps.len());
    for &h in steps {
        let traj = make(h)?;
        drifts.push(drift_with(invariant, &traj, opts)?.max_rel_drift);
    }
    let smallest = steps
        .iter()
        .zip(&drifts)
        .min_by(|a, b| a.0.total_cmp(b.0))
        .map(|(_, d)| *d)
        .unwrap_or(0.0);
    let inconclusive = smallest <= REFINEMENT_FLOOR;
    Ok(ConvergenceRecord {
        steps: steps.to_vec(),
        slope: if inconclusive {
            None
        } else {
            least_squares_slope(steps, &drifts)
        },
        drifts,
        inconclusive,
    })
}

/// RK4 refinement study from `ic` over `[0, t_end]`.
pub fn refinement_study(
    invariant: &InvariantEvaluator,
    system: &ForcedLinearSystem,
    ic: State,
    t_end: f64,
    steps: &[f64],
) -> Result<ConvergenceRecord, Error> {
    refinement_study_with(invariant, steps, &DriftOptions::default(), |h| {
        integrate(
            system,
            ic.x,
            ic.v,
            &TimeGrid::new(0.0, t_end, h)?,
            Method::Rk4,
        )
    })
}
