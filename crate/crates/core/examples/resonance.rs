//! Driving at the natural frequency: the amplitude grows linearly, and the
//! invariant absorbs the growth through explicit time dependence.
//!
//! cargo run --release --example resonance

use forced_invariants::invariant::k_undamped_forced_resonant_with;
use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let p = OscillatorParams::new(1.0, 1.0, 0.0, 1.0, 1.0)?;
    let ps = particular_solution_sinusoidal(&p, DEFAULT_EPS_RES, ResonanceMode::Auto)?;
    println!("particular solution: {:?}", ps.provenance());

    let grid = TimeGrid::new(0.0, 50.0, 1e-3)?;
    let traj = integrate(&p.system(), 1.0, 0.0, &grid, Method::Rk4)?;
    for window in [(0.0, 10.0), (20.0, 30.0), (40.0, 50.0)] {
        let peak = traj
            .iter()
            .filter(|(t, _)| *t >= window.0 && *t < window.1)
            .map(|(_, s)| s.x.abs())
            .fold(0.0, f64::max);
        println!("max |x| on [{:>2}, {:>2}) = {peak:.4}", window.0, window.1);
    }

    let k = k_undamped_forced_resonant(&p, DEFAULT_EPS_RES)?;
    let r = drift(&k, &traj)?;
    println!(
        "\ncross term (v + 2xw²t): drift {:.2e} (scale {:.1})",
        r.max_rel_drift, r.scale
    );

    // with a single x·ω²·t in the cross term the expression is not conserved
    let single = k_undamped_forced_resonant_with(&p, DEFAULT_EPS_RES, ResonantForm::AsPrinted)?;
    let r = drift(&single, &traj)?;
    println!("cross term (v +  xw²t): drift {:.2e}", r.max_rel_drift);
    Ok(())
}
