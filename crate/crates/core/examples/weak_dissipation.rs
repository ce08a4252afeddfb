//! First-order-in-λ invariant: good to O(λ²) per half-turn, but the error
//! compounds if the angle is unwrapped over many turns.
//!
//! cargo run --release --example weak_dissipation

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let grid = TimeGrid::new(0.0, 50.0, 1e-3)?;
    println!(
        "{:>7} {:>12} {:>6} {:>12}",
        "lambda", "per arc", "arcs", "unwrapped"
    );
    for lambda in [0.04, 0.02, 0.01, 0.005] {
        let p = OscillatorParams::new(1.0, 1.0, lambda, 1.0, 2.0)?;
        let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4)?;
        let arcs = drift(
            &k_weak_dissipation(&p, AnglePolicy::PrincipalBranch)?,
            &traj,
        )?;
        let whole = drift(&k_weak_dissipation(&p, AnglePolicy::Unwrapped)?, &traj)?;
        println!(
            "{lambda:>7} {:>12.3e} {:>6} {:>12.3e}",
            arcs.max_rel_drift,
            arcs.arcs.len(),
            whole.max_rel_drift
        );
    }
    Ok(())
}
