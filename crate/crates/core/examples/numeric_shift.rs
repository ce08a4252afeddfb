//! The shift construction with arbitrary forcing: integrate one particular
//! solution numerically and shift the free energy by it.
//!
//! cargo run --release --example numeric_shift

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let forcing = Forcing::custom("sin 2t + 0.5 cos(0.3 t) exp(-t/20)", |t: f64| {
        (2.0 * t).sin() + 0.5 * (0.3 * t).cos() * (-t / 20.0).exp()
    });
    let sys = ForcedLinearSystem::new(-1.0, 0.0, forcing)?;
    let grid = TimeGrid::new(0.0, 50.0, 1e-3)?;

    let alpha = particular_solution_numeric(&sys, &grid)?;
    let k = shift_invariant(&energy(1.0, 1.0)?, &alpha)?;

    for (x0, v0) in [(1.0, 0.0), (-0.5, 2.0), (3.0, -1.0)] {
        // RK45 is independent of the RK4 grid used for α
        let traj = integrate(&sys, x0, v0, &grid, Method::rk45_default())?;
        let r = drift(&k, &traj)?;
        println!(
            "({x0:>4}, {v0:>4}): K = {:.6}, max relative drift {:.2e}",
            r.k0, r.max_rel_drift
        );
    }
    println!(
        "alpha(25) = {:.9}, beta(25) = {:.9}",
        alpha.alpha(25.0),
        alpha.beta(25.0)
    );
    Ok(())
}
