//! Finite-difference check that each invariant solves the transport equation
//! `v K_x + (a x + b v + f) K_v + K_t = 0`.
//!
//! cargo run --release --example pde_residual

use forced_invariants::prelude::*;

fn main() -> Result<(), Error> {
    let steps = [1e-2, 5e-3, 2.5e-3];
    let bounds = SampleBox {
        x: (-3.0, 3.0),
        v: (-3.0, 3.0),
        t: (0.0, 10.0),
    };
    let nonres = OscillatorParams::new(1.0, 1.0, 0.0, 1.0, 2.0)?;
    let res = nonres.with_cap_omega(1.0);
    let damped = nonres.with_lambda(0.4);
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
            k_damped_forced(&damped, AnglePolicy::PrincipalBranch)?,
        ),
        (
            "weak (approx.)",
            damped,
            k_weak_dissipation(&damped, AnglePolicy::PrincipalBranch)?,
        ),
        ("energy (forced)", nonres, energy(1.0, 1.0)?),
    ];
    println!(
        "{:<16} {:>8} {:>8} {:>8}  residuals at first point",
        "invariant", "median", "min", "max"
    );
    for (name, p, k) in cases {
        let sys = p.system();
        let pts = sample_points(&k, &sys, 20, 7, bounds, steps[0]);
        let rep = residual_study(&k, &sys, &pts, &steps)?;
        let f = |o: Option<f64>| o.map_or("-".into(), |o| format!("{o:.3}"));
        let first: Vec<String> = rep.points[0]
            .residuals
            .iter()
            .map(|r| format!("{r:.1e}"))
            .collect();
        println!(
            "{name:<16} {:>8} {:>8} {:>8}  {}",
            f(rep.order_estimate),
            f(rep.min_order),
            f(rep.max_order),
            first.join(" ")
        );
    }
    Ok(())
}
