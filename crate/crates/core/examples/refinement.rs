//! Drift of each exact invariant shrinks like h⁴ under RK4, so what remains
//! is integrator error, not a defect of the invariant.
//!
//! cargo run --release --example refinement

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let steps = [8e-3, 4e-3, 2e-3, 1e-3];
    let nonres = OscillatorParams::new(1.0, 1.0, 0.0, 1.0, 2.0)?;
    let res = nonres.with_cap_omega(1.0);
    let damped = nonres.with_lambda(0.1);
    let cases = [
        (
            "non-resonant",
            nonres,
            k_undamped_forced_nonresonant(&nonres, DEFAULT_EPS_RES)?,
        ),
        (
            "resonant",
            res,
            k_undamped_forced_resonant(&res, DEFAULT_EPS_RES)?,
        ),
        (
            "damped",
            damped,
            k_damped_forced(&damped, AnglePolicy::Unwrapped)?,
        ),
    ];
    for (name, p, k) in cases {
        let rec = refinement_study(&k, &p.system(), State::new(1.0, 0.0), 50.0, &steps)?;
        let drifts: Vec<String> = rec.drifts.iter().map(|d| format!("{d:.2e}")).collect();
        let slope = rec
            .slope
            .map_or("inconclusive".into(), |s| format!("{s:.2}"));
        println!("{name:<13} [{}]  slope {slope}", drifts.join(", "));
    }
    Ok(())
}
