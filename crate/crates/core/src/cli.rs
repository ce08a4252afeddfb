//! Batch commands behind the `forced-invariants` binary.
//!
//! Every command takes a [`RunConfig`] and writes CSV or JSON to a writer.
//! Output depends only on the configuration (and its seed), so identical
//! runs are byte-identical. CSV numbers use 17 significant digits in
//! scientific notation; JSON numbers use the shortest round-trip form.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, particular_solution_numeric, Method, TimeGrid, Trajectory};
use crate::error::Error;
use crate::gfunc::CriticalBranch;
use crate::invariant::{
    energy, k_autonomous_damped_with, k_damped_forced_with, k_undamped_forced_nonresonant,
    k_undamped_forced_resonant, k_weak_dissipation, shift_invariant, AnglePolicy, DampedConfig,
    InvariantEvaluator, InvariantKind,
};
use crate::particular::{
    is_resonant, particular_solution_sinusoidal, ParticularSolution, ResonanceMode, DEFAULT_EPS_RES,
};
use crate::regime::DEFAULT_EPS_CRIT;
use crate::system::{ForcedLinearSystem, OscillatorParams};
use crate::verification::{
    drift_with, refinement_study_with, residual_study, sample_points, DriftOptions, DriftReport,
    ResidualReport, SampleBox, DEFAULT_DRIFT_FLOOR,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical aborts, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::NearResonance { .. }
            | Error::NotAutonomous
            | Error::StepOverflow { .. }
            | Error::MetadataMismatch { .. } => CliError::Config(e.to_string()),
            Error::NonFinite { .. }
            | Error::StepSizeUnderflow { .. }
            | Error::Evaluation { .. }
            | Error::SingularProximity { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

fn config_err(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("invalid parameter `{field}`: {reason}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantChoice {
    /// Damped if λ > 0, resonant if Ω is in the resonance band, else non-resonant.
    Auto,
    Nonresonant,
    Resonant,
    Damped,
    Weak,
    /// Plain mechanical energy; not conserved under forcing.
    Energy,
    /// Autonomous invariant shifted by the closed-form particular solution.
    Composed,
    /// Autonomous invariant shifted by a numerically integrated particular solution.
    NumericComposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParticularChoice {
    Closed,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub omega_min: f64,
    pub omega_max: f64,
    pub count: usize,
    /// Undamped points with `|Ω - ω| <= band·ω` are marked `excluded`.
    pub band: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            omega_min: 0.5,
            omega_max: 1.5,
            count: 101,
            band: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub points: usize,
    pub steps: Vec<f64>,
    pub x_range: (f64, f64),
    pub v_range: (f64, f64),
    /// Defaults to the run's time interval.
    pub t_range: Option<(f64, f64)>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            points: 20,
            steps: vec![1e-2, 5e-3, 2.5e-3],
            x_range: (-3.0, 3.0),
            v_range: (-3.0, 3.0),
            t_range: None,
        }
    }
}

/// Everything a command needs. Missing JSON fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub amp: f64,
    pub cap_omega: f64,
    pub x0: f64,
    pub v0: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub method: MethodChoice,
    pub atol: f64,
    pub rtol: f64,
    pub invariant: InvariantChoice,
    pub policy: AnglePolicy,
    pub critical: CriticalBranch,
    /// Output format; each command has its own default when unset.
    pub format: Option<Format>,
    pub seed: u64,
    pub eps_res: f64,
    pub eps_crit: f64,
    pub drift_floor: f64,
    pub particular: ParticularChoice,
    pub sweep: SweepConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 1.0,
            omega: 1.0,
            lambda: 0.0,
            amp: 1.0,
            cap_omega: 2.0,
            x0: 1.0,
            v0: 0.0,
            t_start: 0.0,
            t_end: 50.0,
            dt: 1e-3,
            method: MethodChoice::Rk4,
            atol: 1e-12,
            rtol: 1e-10,
            invariant: InvariantChoice::Auto,
            policy: AnglePolicy::Unwrapped,
            critical: CriticalBranch::Negated,
            format: None,
            seed: 2024,
            eps_res: DEFAULT_EPS_RES,
            eps_crit: DEFAULT_EPS_CRIT,
            drift_floor: DEFAULT_DRIFT_FLOOR,
            particular: ParticularChoice::Closed,
            sweep: SweepConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    /// Reads a JSON config from `path`, or from standard input when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?
        };
        Self::from_json(&text)
    }

    pub fn params(&self) -> Result<OscillatorParams, CliError> {
        Ok(OscillatorParams::new(
            self.m,
            self.omega,
            self.lambda,
            self.amp,
            self.cap_omega,
        )?)
    }

    pub fn grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(self.t_start, self.t_end, self.dt)?)
    }

    pub fn integrator(&self) -> Method {
        match self.method {
            MethodChoice::Rk4 => Method::Rk4,
            MethodChoice::Rk45 => Method::Rk45 {
                atol: self.atol,
                rtol: self.rtol,
            },
        }
    }

    /// Checks every field without running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        self.grid()?.validate()?;
        for (field, value) in [("x0", self.x0), ("v0", self.v0)] {
            if !value.is_finite() {
                return Err(config_err(field, "must be finite"));
            }
        }
        for (field, value) in [
            ("eps_res", self.eps_res),
            ("eps_crit", self.eps_crit),
            ("drift_floor", self.drift_floor),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(config_err(field, "must be finite and non-negative"));
            }
        }
        if self.method == MethodChoice::Rk45 && !(self.atol > 0.0 && self.rtol > 0.0) {
            return Err(config_err("atol", "RK45 needs atol > 0 and rtol > 0"));
        }
        Ok(())
    }

    /// The invariant kind that `auto` resolves to.
    pub fn resolved_invariant(&self) -> InvariantChoice {
        match self.invariant {
            InvariantChoice::Auto => {
                if self.lambda > 0.0 {
                    InvariantChoice::Damped
                } else if self.params().is_ok_and(|p| is_resonant(&p, self.eps_res)) {
                    InvariantChoice::Resonant
                } else {
                    InvariantChoice::Nonresonant
                }
            }
            other => other,
        }
    }

    fn damped_config(&self) -> DampedConfig {
        DampedConfig {
            eps_crit: self.eps_crit,
            critical: self.critical,
        }
    }

    fn particular_solution(
        &self,
        p: &OscillatorParams,
        choice: ParticularChoice,
    ) -> Result<ParticularSolution, CliError> {
        Ok(match choice {
            ParticularChoice::Closed => {
                particular_solution_sinusoidal(p, self.eps_res, ResonanceMode::Auto)?
            }
            ParticularChoice::Numeric => particular_solution_numeric(&p.system(), &self.grid()?)?,
        })
    }

    /// Builds the configured invariant for `p`.
    pub fn build_invariant(&self, p: &OscillatorParams) -> Result<InvariantEvaluator, CliError> {
        let k = match self.resolved_invariant() {
            InvariantChoice::Auto => unreachable!("resolved above"),
            InvariantChoice::Nonresonant => k_undamped_forced_nonresonant(p, self.eps_res)?,
            InvariantChoice::Resonant => k_undamped_forced_resonant(p, self.eps_res)?,
            InvariantChoice::Damped => k_damped_forced_with(p, self.policy, self.damped_config())?,
            InvariantChoice::Weak => k_weak_dissipation(p, self.policy)?,
            InvariantChoice::Energy => energy(p.m, p.omega)?,
            InvariantChoice::Composed | InvariantChoice::NumericComposed => {
                let base = k_autonomous_damped_with(p, self.policy, self.damped_config())?;
                let choice = if self.resolved_invariant() == InvariantChoice::Composed {
                    ParticularChoice::Closed
                } else {
                    ParticularChoice::Numeric
                };
                shift_invariant(&base, &self.particular_solution(p, choice)?)?
            }
        };
        Ok(k)
    }

    fn drift_options(&self) -> DriftOptions {
        // the energy is deliberately evaluated on a system it does not
        // belong to, and the resonant invariant is built at Ω = ω exactly
        let check_metadata = !matches!(
            self.resolved_invariant(),
            InvariantChoice::Energy | InvariantChoice::Resonant
        );
        DriftOptions {
            floor: self.drift_floor,
            check_metadata,
        }
    }

    fn trajectory(
        &self,
        system: &ForcedLinearSystem,
        grid: &TimeGrid,
    ) -> Result<Trajectory, CliError> {
        Ok(integrate(
            system,
            self.x0,
            self.v0,
            grid,
            self.integrator(),
        )?)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn num(x: f64) -> String {
    // `+ 0.0` folds -0 into 0
    format!("{:.16e}", x + 0.0)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| CliError::Io(io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}

/// Writes `header` and `rows` as CSV, or as a JSON array of objects keyed by
/// the header names.
fn write_table(
    out: &mut dyn Write,
    format: Format,
    header: &[&str],
    rows: &[Vec<Cell>],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", header.join(","))?;
            for row in rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect()
                })
                .collect();
            write_json(out, &objects)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Num(f64),
    Excluded,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Excluded => "excluded".to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::json!(x),
            Cell::Excluded => serde_json::Value::String("excluded".into()),
        }
    }
}

/// `t,x,v,K,rel_drift` for every grid sample.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    let p = cfg.params()?;
    let k = cfg.build_invariant(&p)?;
    let traj = cfg.trajectory(&p.system(), &cfg.grid()?)?;
    let report = drift_with(&k, &traj, &cfg.drift_options())?;
    let rows: Vec<Vec<Cell>> = traj
        .iter()
        .zip(report.k_values.iter().zip(&report.rel_drift))
        .map(|((t, s), (&kv, &rd))| {
            vec![
                Cell::Num(t),
                Cell::Num(s.x),
                Cell::Num(s.v),
                Cell::Num(kv),
                Cell::Num(rd),
            ]
        })
        .collect();
    write_table(
        out,
        cfg.format_or(Format::Csv),
        &["t", "x", "v", "K", "rel_drift"],
        &rows,
    )
}

#[derive(Serialize)]
struct DriftOutput<'a> {
    invariant: InvariantKind,
    normalization: &'a str,
    method: Method,
    h: f64,
    #[serde(flatten)]
    report: &'a DriftReport,
}

/// Drift report as JSON. `order_estimate` comes from RK4 runs at
/// `4h, 2h, h`; it is null for RK45 or when the drift sits at rounding level.
pub fn cmd_drift(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    if cfg.format_or(Format::Json) != Format::Json {
        return Err(config_err("format", "drift emits JSON only"));
    }
    let p = cfg.params()?;
    let system = p.system();
    let k = cfg.build_invariant(&p)?;
    let opts = cfg.drift_options();
    let traj = cfg.trajectory(&system, &cfg.grid()?)?;
    let mut report = drift_with(&k, &traj, &opts)?;
    if cfg.method == MethodChoice::Rk4 {
        let steps = [4.0 * cfg.dt, 2.0 * cfg.dt, cfg.dt];
        let rec = refinement_study_with(&k, &steps, &opts, |h| {
            let grid = TimeGrid::new(cfg.t_start, cfg.t_end, h)?;
            integrate(&system, cfg.x0, cfg.v0, &grid, Method::Rk4)
        })?;
        report.order_estimate = rec.slope;
    }
    write_json(
        out,
        &DriftOutput {
            invariant: k.kind(),
            normalization: k.normalization(),
            method: cfg.integrator(),
            h: cfg.dt,
            report: &report,
        },
    )
}

#[derive(Serialize)]
struct ResidualOutput<'a> {
    invariant: InvariantKind,
    seed: u64,
    #[serde(flatten)]
    report: &'a ResidualReport,
}

/// Finite-difference PDE residuals at seeded random points, as JSON.
pub fn cmd_verify_pde(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    if cfg.format_or(Format::Json) != Format::Json {
        return Err(config_err("format", "verify-pde emits JSON only"));
    }
    let v = &cfg.verify;
    if v.points == 0 {
        return Err(config_err("verify.points", "must be at least 1"));
    }
    let h_max = v.steps.iter().copied().fold(0.0, f64::max);
    if v.steps.len() < 3 || h_max.is_nan() || h_max <= 0.0 {
        return Err(config_err(
            "verify.steps",
            "needs at least 3 positive steps",
        ));
    }
    let p = cfg.params()?;
    // the numerically composed invariant needs α over the sampled times
    let k = cfg.build_invariant(&p)?;
    let system = p.system();
    let bounds = SampleBox {
        x: v.x_range,
        v: v.v_range,
        t: v.t_range.unwrap_or((cfg.t_start, cfg.t_end)),
    };
    for (field, (lo, hi)) in [
        ("verify.x_range", bounds.x),
        ("verify.v_range", bounds.v),
        ("verify.t_range", bounds.t),
    ] {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(config_err(field, "must be a finite, ordered pair"));
        }
    }
    let pts = sample_points(&k, &system, v.points, cfg.seed, bounds, h_max);
    if pts.len() < v.points {
        return Err(CliError::Numerical(format!(
            "found only {} of {} points clear of singular loci",
            pts.len(),
            v.points
        )));
    }
    let report = residual_study(&k, &system, &pts, &v.steps)?;
    write_json(
        out,
        &ResidualOutput {
            invariant: k.kind(),
            seed: cfg.seed,
            report: &report,
        },
    )
}

/// One row per forcing frequency: the steady-state amplitude `max|α|` over
/// the grid and the drift of the matching invariant along a trajectory.
///
/// Undamped frequencies inside the resonance band are marked `excluded`.
/// Rows are computed in parallel and emitted in order of Ω.
pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    let s = &cfg.sweep;
    if s.count < 2 {
        return Err(config_err("sweep.count", "must be at least 2"));
    }
    if !(s.omega_min.is_finite()
        && s.omega_max.is_finite()
        && 0.0 < s.omega_min
        && s.omega_min < s.omega_max)
    {
        return Err(config_err(
            "sweep.omega_min",
            "need 0 < omega_min < omega_max",
        ));
    }
    if !(s.band.is_finite() && s.band >= 0.0) {
        return Err(config_err("sweep.band", "must be finite and non-negative"));
    }
    let base = cfg.params()?;
    let grid = cfg.grid()?;
    let times = grid.times()?;
    let step = (s.omega_max - s.omega_min) / (s.count - 1) as f64;
    let rows = (0..s.count)
        .into_par_iter()
        .map(|i| {
            let cap = if i + 1 == s.count {
                s.omega_max
            } else {
                s.omega_min + i as f64 * step
            };
            let p = base.with_cap_omega(cap);
            if p.lambda == 0.0 && (cap - p.omega).abs() <= s.band * p.omega {
                return Ok(vec![Cell::Num(cap), Cell::Excluded, Cell::Excluded]);
            }
            let ps = particular_solution_sinusoidal(&p, cfg.eps_res, ResonanceMode::Auto)?;
            let amplitude = times.iter().map(|&t| ps.alpha(t).abs()).fold(0.0, f64::max);
            let run = RunConfig {
                cap_omega: cap,
                invariant: InvariantChoice::Auto,
                ..cfg.clone()
            };
            let k = run.build_invariant(&p)?;
            let traj = run.trajectory(&p.system(), &grid)?;
            let d = drift_with(&k, &traj, &run.drift_options())?;
            Ok(vec![
                Cell::Num(cap),
                Cell::Num(amplitude),
                Cell::Num(d.max_rel_drift),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_table(
        out,
        cfg.format_or(Format::Csv),
        &["Omega", "max_amplitude", "max_rel_drift"],
        &rows,
    )
}

/// `t,alpha,beta` of the configured particular solution on the grid.
pub fn cmd_particular(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    let p = cfg.params()?;
    let ps = cfg.particular_solution(&p, cfg.particular)?;
    let rows: Vec<Vec<Cell>> = cfg
        .grid()?
        .times()?
        .into_iter()
        .map(|t| vec![Cell::Num(t), Cell::Num(ps.alpha(t)), Cell::Num(ps.beta(t))])
        .collect();
    write_table(
        out,
        cfg.format_or(Format::Csv),
        &["t", "alpha", "beta"],
        &rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(
        cmd: fn(&RunConfig, &mut dyn Write) -> Result<(), CliError>,
        cfg: &RunConfig,
    ) -> Result<String, CliError> {
        let mut buf = Vec::new();
        cmd(cfg, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    fn short() -> RunConfig {
        RunConfig {
            t_end: 2.0,
            dt: 1e-2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn missing_fields_take_defaults() {
        let cfg = RunConfig::from_json(r#"{"lambda": 0.5, "sweep": {"count": 5}}"#).unwrap();
        assert_eq!(cfg.lambda, 0.5);
        assert_eq!(cfg.m, 1.0);
        assert_eq!(cfg.sweep.count, 5);
        assert_eq!(cfg.sweep.band, 0.02);
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let e = RunConfig::from_json(r#"{"mass": 1}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn auto_selection() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.resolved_invariant(), InvariantChoice::Nonresonant);
        cfg.cap_omega = 1.0;
        assert_eq!(cfg.resolved_invariant(), InvariantChoice::Resonant);
        cfg.lambda = 0.1;
        assert_eq!(cfg.resolved_invariant(), InvariantChoice::Damped);
    }

    #[test]
    fn invalid_mass_names_the_field() {
        let cfg = RunConfig { m: -1.0, ..short() };
        let e = run(cmd_simulate, &cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("`m`"), "{e}");
    }

    #[test]
    fn simulate_header_and_rows() {
        let text = run(cmd_simulate, &short()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,v,K,rel_drift"));
        assert_eq!(lines.count(), 201);
    }

    #[test]
    fn unforced_equilibrium_rows_are_zero() {
        let cfg = RunConfig {
            amp: 0.0,
            x0: 0.0,
            v0: 0.0,
            ..short()
        };
        let text = run(cmd_simulate, &cfg).unwrap();
        for line in text.lines().skip(1) {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(&cols[1..], &[0.0, 0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn json_table_uses_header_keys() {
        let cfg = RunConfig {
            format: Some(Format::Json),
            t_end: 0.02,
            ..short()
        };
        let text = run(cmd_particular, &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 3);
        assert!(v[0].get("alpha").is_some());
    }

    #[test]
    fn drift_rejects_csv() {
        let cfg = RunConfig {
            format: Some(Format::Csv),
            ..short()
        };
        assert_eq!(run(cmd_drift, &cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sweep_marks_resonance_band() {
        let cfg = RunConfig {
            sweep: SweepConfig {
                omega_min: 0.9,
                omega_max: 1.1,
                count: 3,
                band: 0.02,
            },
            ..short()
        };
        let text = run(cmd_sweep, &cfg).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "Omega,max_amplitude,max_rel_drift");
        assert!(lines[2].ends_with(",excluded,excluded"));
        assert!(!lines[1].contains("excluded"));
    }

    #[test]
    fn non_finite_state_is_numerical() {
        let e: CliError = Error::NonFinite { t: 1.0 }.into();
        assert_eq!(e.exit_code(), 3);
    }
}
