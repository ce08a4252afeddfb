//! Steady-state amplitude against forcing frequency, through the same entry
//! point as `forced-invariants sweep`.
//!
//! cargo run --release --example resonance_sweep

use forced_invariants::cli::{cmd_sweep, RunConfig, SweepConfig};

fn main() {
    for lambda in [0.0, 0.2, 1.0] {
        let cfg = RunConfig {
            lambda,
            t_end: 20.0,
            sweep: SweepConfig {
                omega_min: 0.5,
                omega_max: 1.5,
                count: 21,
                band: 0.02,
            },
            ..RunConfig::default()
        };
        let mut out = Vec::new();
        if let Err(e) = cmd_sweep(&cfg, &mut out) {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
        println!("lambda = {lambda}");
        for line in String::from_utf8(out).unwrap().lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let omega: f64 = cols[0].parse().unwrap();
            match cols[1].parse::<f64>() {
                Ok(a) => println!(
                    "  {omega:.2} {a:>8.3} {}",
                    "#".repeat((a * 6.0).min(60.0) as usize)
                ),
                Err(_) => println!("  {omega:.2} {:>8}", cols[1]),
            }
        }
    }
}
