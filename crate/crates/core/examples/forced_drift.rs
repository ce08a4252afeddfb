//! Energy drifts under forcing; the time-dependent invariant does not.
//!
//! cargo run --release --example forced_drift

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let p = OscillatorParams::new(1.0, 1.0, 0.0, 1.0, 2.0)?;
    let grid = TimeGrid::new(0.0, 50.0, 1e-3)?;
    let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4)?;

    let k = k_undamped_forced_nonresonant(&p, DEFAULT_EPS_RES)?;
    let report = drift(&k, &traj)?;
    println!(
        "K      : k0 = {:.6}, max relative drift {:.2e}",
        report.k0, report.max_rel_drift
    );

    // the energy belongs to the free oscillator, so skip the system check
    let opts = DriftOptions {
        check_metadata: false,
        ..Default::default()
    };
    let e = drift_with(&energy(1.0, 1.0)?, &traj, &opts)?;
    println!(
        "energy : E0 = {:.6}, max relative drift {:.2e}",
        e.k0, e.max_rel_drift
    );

    println!("\n{:>6} {:>12} {:>12}", "t", "K", "energy");
    for i in (0..traj.len()).step_by(5000) {
        println!(
            "{:>6.1} {:>12.9} {:>12.9}",
            traj.times[i], report.k_values[i], e.k_values[i]
        );
    }
    Ok(())
}
