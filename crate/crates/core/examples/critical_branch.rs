//! At critical damping G has two candidate signs. Only one is conserved.
//!
//! cargo run --release --example critical_branch

use forced_invariants::invariant::k_damped_forced_with;
use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    for (amp, t_end) in [(0.0, 50.0), (1.0, 10.0)] {
        let p = OscillatorParams::new(1.0, 1.0, 2.0, amp, 2.0)?;
        let grid = TimeGrid::new(0.0, t_end, 1e-3)?;
        let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4)?;
        println!(
            "A = {amp}, t in [0, {t_end}], regime {:?}",
            classify_damping(&p, DEFAULT_EPS_CRIT).regime
        );
        for (label, branch) in [
            ("-1/(gamma + xi)", CriticalBranch::Negated),
            ("+1/(gamma + xi)", CriticalBranch::Printed),
        ] {
            let cfg = DampedConfig {
                critical: branch,
                ..Default::default()
            };
            let k = k_damped_forced_with(&p, AnglePolicy::Unwrapped, cfg)?;
            let r = drift(&k, &traj)?;
            println!("  G = {label}: max relative drift {:.3e}", r.max_rel_drift);
        }
    }
    // dG/dt along the free flow: -1 is required
    let p = OscillatorParams::new(1.0, 1.0, 2.0, 0.0, 0.0)?;
    let (x, v, h) = (1.0f64, 0.3f64, 1e-6);
    let xi_dot = -(v / x).powi(2) - 2.0 * p.gamma() * (v / x) - p.omega.powi(2);
    for branch in [CriticalBranch::Negated, CriticalBranch::Printed] {
        let g = GFunction::new(&p, DEFAULT_EPS_CRIT, branch);
        let dg = (g.eval(v / x + h).map_err(eval)? - g.eval(v / x - h).map_err(eval)?) / (2.0 * h);
        println!("{branch:?}: dG/dt = {:.6}", dg * xi_dot);
    }
    Ok(())
}

fn eval(e: EvalError) -> Error {
    Error::Evaluation {
        index: 0,
        t: 0.0,
        source: e,
    }
}
