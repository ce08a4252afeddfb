//! The damped invariant in each regime, and why the angle has to be unwrapped.
//!
//! cargo run --release --example damped_unwrapped

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    println!(
        "{:>6} {:>12} {:>7} {:>14} {:>14}",
        "lambda", "regime", "t_end", "unwrapped", "principal"
    );
    for lambda in [0.1, 0.5, 2.0, 3.0] {
        let p = OscillatorParams::new(1.0, 1.0, lambda, 1.0, 2.0)?;
        let regime = classify_damping(&p, DEFAULT_EPS_CRIT).regime;
        // without oscillation the decaying modes of x - α are soon swamped by
        // integrator error, which K amplifies exponentially in t
        let t_end = match regime {
            Regime::Underdamped => 50.0,
            Regime::Critical => 10.0,
            Regime::Overdamped => 5.0,
        };
        let grid = TimeGrid::new(0.0, t_end, 1e-3)?;
        let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4)?;
        let unwrapped = drift(&k_damped_forced(&p, AnglePolicy::Unwrapped)?, &traj)?;
        // whole-run drift with the principal branch: jumps at every x = α crossing
        let k = k_damped_forced(&p, AnglePolicy::PrincipalBranch)?;
        let principal = k_values_spread(&k, &traj);
        println!(
            "{lambda:>6} {:>12} {t_end:>7} {:>14.2e} {:>14.2e}",
            format!("{regime:?}"),
            unwrapped.max_rel_drift,
            principal
        );
    }
    Ok(())
}

fn k_values_spread(k: &InvariantEvaluator, traj: &Trajectory) -> f64 {
    let vals: Vec<f64> = traj
        .iter()
        .filter_map(|(t, s)| k.eval(s.x, s.v, t).ok())
        .collect();
    let k0 = vals[0];
    vals.iter()
        .map(|v| ((v - k0) / k0).abs())
        .fold(0.0, f64::max)
}
