//! Trajectory integration of forced linear systems and numerical particular
//! solutions with dense output.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::particular::ParticularSolution;
use crate::system::{ForcedLinearSystem, SystemTag};

/// Default cap on the number of grid samples.
pub const DEFAULT_MAX_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub v: f64,
}

impl State {
    pub fn new(x: f64, v: f64) -> Self {
        State { x, v }
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.is_finite()
    }
}

/// Uniform sample times `t_start, t_start + h, ...`, ending exactly at
/// `t_end` (the last step may be shorter).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub h: f64,
    pub max_samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, h: f64) -> Result<Self, Error> {
        let grid = TimeGrid {
            t_start,
            t_end,
            h,
            max_samples: DEFAULT_MAX_SAMPLES,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_max_samples(mut self, max_samples: usize) -> Self {
        self.max_samples = max_samples;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.t_start.is_finite() {
            return Err(Error::invalid("t_start", "must be finite"));
        }
        if !self.t_end.is_finite() || self.t_end <= self.t_start {
            return Err(Error::invalid("t_end", "must be finite and > t_start"));
        }
        if !self.h.is_finite() || self.h <= 0.0 {
            return Err(Error::invalid("h", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Number of steps; a trailing fragment shorter than `1e-9 h` is absorbed.
    pub fn steps(&self) -> usize {
        let n = (self.t_end - self.t_start) / self.h;
        (n - 1e-9).ceil().max(1.0) as usize
    }

    pub fn times(&self) -> Result<Vec<f64>, Error> {
        self.validate()?;
        let steps = self.steps();
        if steps + 1 > self.max_samples {
            return Err(Error::StepOverflow {
                needed: steps + 1,
                cap: self.max_samples,
            });
        }
        let mut times: Vec<f64> = (0..steps)
            .map(|i| self.t_start + i as f64 * self.h)
            .collect();
        times.push(self.t_end);
        Ok(times)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Method {
    Rk4,
    /// Adaptive Dormand-Prince 5(4) interpolated onto the grid.
    Rk45 {
        atol: f64,
        rtol: f64,
    },
}

impl Method {
    pub fn rk45_default() -> Self {
        Method::Rk45 {
            atol: 1e-12,
            rtol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub method: Method,
    pub h: f64,
    pub initial: State,
    pub system: SystemTag,
}

/// Sampled flow of a [`ForcedLinearSystem`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Builds a trajectory from precomputed samples, e.g. an exact flow.
    pub fn from_samples(
        times: Vec<f64>,
        states: Vec<State>,
        meta: TrajectoryMeta,
    ) -> Result<Self, Error> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::invalid(
                "states",
                "must be non-empty and match times",
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("times", "must be strictly increasing"));
        }
        Ok(Trajectory {
            times,
            states,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> (f64, State) {
        let i = self.len() - 1;
        (self.times[i], self.states[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, State)> + '_ {
        self.times.iter().copied().zip(self.states.iter().copied())
    }
}

#[inline]
fn deriv(sys: &ForcedLinearSystem, t: f64, s: State) -> State {
    State::new(s.v, sys.accel(s.x, s.v, t))
}

#[inline]
fn axpy(s: State, h: f64, k: State) -> State {
    State::new(s.x + h * k.x, s.v + h * k.v)
}

/// The RK4 increment over one step of size `h`.
fn rk4_increment(sys: &ForcedLinearSystem, t: f64, s: State, h: f64) -> State {
    let k1 = deriv(sys, t, s);
    let k2 = deriv(sys, t + 0.5 * h, axpy(s, 0.5 * h, k1));
    let k3 = deriv(sys, t + 0.5 * h, axpy(s, 0.5 * h, k2));
    let k4 = deriv(sys, t + h, axpy(s, h, k3));
    State::new(
        h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
    )
}

/// Kahan-compensated `sum += inc`; keeps rounding error from accumulating
/// over long runs of small steps.
fn kahan_add(sum: &mut f64, comp: &mut f64, inc: f64) {
    let y = inc - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Integrates `system` from `(x0, v0)` at `grid.t_start` and samples it on the grid.
pub fn integrate(
    system: &ForcedLinearSystem,
    x0: f64,
    v0: f64,
    grid: &TimeGrid,
    method: Method,
) -> Result<Trajectory, Error> {
    let times = grid.times()?;
    let initial = State::new(x0, v0);
    if !initial.is_finite() {
        return Err(Error::NonFinite { t: grid.t_start });
    }
    let states = match method {
        Method::Rk4 => rk4_on_grid(system, initial, &times)?,
        Method::Rk45 { atol, rtol } => {
            if !(atol > 0.0 && rtol > 0.0) {
                return Err(Error::invalid(
                    "tolerance",
                    "RK45 needs atol > 0 and rtol > 0",
                ));
            }
            dopri::on_grid(system, initial, &times, atol, rtol)?
        }
    };
    Ok(Trajectory {
        times,
        states,
        meta: TrajectoryMeta {
            method,
            h: grid.h,
            initial,
            system: system.tag(),
        },
    })
}

fn rk4_on_grid(
    system: &ForcedLinearSystem,
    initial: State,
    times: &[f64],
) -> Result<Vec<State>, Error> {
    let mut states = Vec::with_capacity(times.len());
    let mut s = initial;
    let mut comp = State::new(0.0, 0.0);
    states.push(s);
    for w in times.windows(2) {
        let inc = rk4_increment(system, w[0], s, w[1] - w[0]);
        kahan_add(&mut s.x, &mut comp.x, inc.x);
        kahan_add(&mut s.v, &mut comp.v, inc.v);
        if !s.is_finite() {
            return Err(Error::NonFinite { t: w[1] });
        }
        states.push(s);
    }
    Ok(states)
}

mod dopri {
    use super::{axpy, deriv, State};
    use crate::error::Error;
    use crate::system::ForcedLinearSystem;

    const C2: f64 = 1.0 / 5.0;
    const C3: f64 = 3.0 / 10.0;
    const C4: f64 = 4.0 / 5.0;
    const C5: f64 = 8.0 / 9.0;
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const A71: f64 = 35.0 / 384.0;
    const A73: f64 = 500.0 / 1113.0;
    const A74: f64 = 125.0 / 192.0;
    const A75: f64 = -2187.0 / 6784.0;
    const A76: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;
    // dense output
    const D1: f64 = -12715105075.0 / 11282082432.0;
    const D3: f64 = 87487479700.0 / 32700410799.0;
    const D4: f64 = -10690763975.0 / 1880347072.0;
    const D5: f64 = 701980252875.0 / 199316789632.0;
    const D6: f64 = -1453857185.0 / 822651844.0;
    const D7: f64 = 69997945.0 / 29380423.0;

    const MAX_STEPS: usize = 50_000_000;

    fn comb(s: State, h: f64, terms: &[(f64, State)]) -> State {
        let (mut dx, mut dv) = (0.0, 0.0);
        for (c, k) in terms {
            dx += c * k.x;
            dv += c * k.v;
        }
        State::new(s.x + h * dx, s.v + h * dv)
    }

    /// Continuous extension over one accepted step.
    struct Dense {
        t: f64,
        h: f64,
        r: [State; 5],
    }

    impl Dense {
        fn eval(&self, t: f64) -> State {
            let th = (t - self.t) / self.h;
            let th1 = 1.0 - th;
            let f = |c: [f64; 5]| c[0] + th * (c[1] + th1 * (c[2] + th * (c[3] + th1 * c[4])));
            let r = &self.r;
            State::new(
                f([r[0].x, r[1].x, r[2].x, r[3].x, r[4].x]),
                f([r[0].v, r[1].v, r[2].v, r[3].v, r[4].v]),
            )
        }
    }

    pub fn on_grid(
        sys: &ForcedLinearSystem,
        initial: State,
        times: &[f64],
        atol: f64,
        rtol: f64,
    ) -> Result<Vec<State>, Error> {
        let t_end = *times.last().expect("grid is never empty");
        let mut out = Vec::with_capacity(times.len());
        out.push(initial);
        let mut next = 1;

        let mut t = times[0];
        let mut y = initial;
        let mut k1 = deriv(sys, t, y);
        let mut h = (times[1] - times[0]).clamp(1e-6, 0.1);
        let mut steps = 0;
        while next < times.len() {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::StepOverflow {
                    needed: steps,
                    cap: MAX_STEPS,
                });
            }
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t });
            }
            let k2 = deriv(sys, t + C2 * h, axpy(y, h * A21, k1));
            let k3 = deriv(sys, t + C3 * h, comb(y, h, &[(A31, k1), (A32, k2)]));
            let k4 = deriv(
                sys,
                t + C4 * h,
                comb(y, h, &[(A41, k1), (A42, k2), (A43, k3)]),
            );
            let k5 = deriv(
                sys,
                t + C5 * h,
                comb(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
            );
            let k6 = deriv(
                sys,
                t + h,
                comb(
                    y,
                    h,
                    &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
                ),
            );
            let y1 = comb(
                y,
                h,
                &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
            );
            let k7 = deriv(sys, t + h, y1);
            if !y1.is_finite() {
                return Err(Error::NonFinite { t: t + h });
            }
            let err = comb(
                State::new(0.0, 0.0),
                h,
                &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
            );
            let sc = |a: f64, b: f64| atol + rtol * a.abs().max(b.abs());
            let en =
                (((err.x / sc(y.x, y1.x)).powi(2) + (err.v / sc(y.v, y1.v)).powi(2)) / 2.0).sqrt();
            if en <= 1.0 {
                let ydiff = State::new(y1.x - y.x, y1.v - y.v);
                let bspl = State::new(h * k1.x - ydiff.x, h * k1.v - ydiff.v);
                let r4 = State::new(ydiff.x - h * k7.x - bspl.x, ydiff.v - h * k7.v - bspl.v);
                let r5 = comb(
                    State::new(0.0, 0.0),
                    h,
                    &[(D1, k1), (D3, k3), (D4, k4), (D5, k5), (D6, k6), (D7, k7)],
                );
                let dense = Dense {
                    t,
                    h,
                    r: [y, ydiff, bspl, r4, r5],
                };
                let t_new = if last { t_end } else { t + h };
                while next < times.len() && times[next] <= t_new {
                    out.push(if times[next] == t_new {
                        y1
                    } else {
                        dense.eval(times[next])
                    });
                    next += 1;
                }
                t = t_new;
                y = y1;
                k1 = k7;
            }
            let factor = if en == 0.0 {
                5.0
            } else {
                (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= if en <= 1.0 { factor } else { factor.min(1.0) };
        }
        Ok(out)
    }
}

/// Numerically sampled particular solution with cubic Hermite dense output.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    system: ForcedLinearSystem,
    times: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl DenseSolution {
    pub fn system(&self) -> &ForcedLinearSystem {
        &self.system
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn segment(&self, t: f64) -> Option<(usize, f64, f64)> {
        let (t0, t1) = self.domain();
        if !(t0..=t1).contains(&t) {
            return None;
        }
        let i = self
            .times
            .partition_point(|&s| s <= t)
            .clamp(1, self.times.len() - 1)
            - 1;
        let h = self.times[i + 1] - self.times[i];
        Some((i, (t - self.times[i]) / h, h))
    }

    fn accel(&self, i: usize) -> f64 {
        self.system
            .accel(self.alpha[i], self.beta[i], self.times[i])
    }

    pub fn alpha(&self, t: f64) -> f64 {
        match self.segment(t) {
            Some((i, s, h)) => hermite(
                s,
                h,
                self.alpha[i],
                self.beta[i],
                self.alpha[i + 1],
                self.beta[i + 1],
            ),
            None => f64::NAN,
        }
    }

    pub fn beta(&self, t: f64) -> f64 {
        match self.segment(t) {
            Some((i, s, h)) => hermite(
                s,
                h,
                self.beta[i],
                self.accel(i),
                self.beta[i + 1],
                self.accel(i + 1),
            ),
            None => f64::NAN,
        }
    }

    /// Right-hand side of the forced equation at the interpolated `(α, β)`.
    pub fn alpha_ddot(&self, t: f64) -> f64 {
        self.system.accel(self.alpha(t), self.beta(t), t)
    }
}

fn hermite(s: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Particular solution of `α'' = a α + b α' + f(t)` with `α = α' = 0` at
/// `grid.t_start`, integrated by RK4 and interpolated between samples.
pub fn particular_solution_numeric(
    system: &ForcedLinearSystem,
    grid: &TimeGrid,
) -> Result<ParticularSolution, Error> {
    let traj = integrate(system, 0.0, 0.0, grid, Method::Rk4)?;
    let dense = DenseSolution {
        system: system.clone(),
        alpha: traj.states.iter().map(|s| s.x).collect(),
        beta: traj.states.iter().map(|s| s.v).collect(),
        times: traj.times,
    };
    Ok(ParticularSolution::numeric(dense))
}
