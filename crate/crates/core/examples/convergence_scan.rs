//! How fast `g(sΨ̃w)` approaches its radial limit as `s` grows.

use fde::catalog::{duffing_delay, ExampleParams};
use fde::lazer_leach::{gamma_convergence, phase_element};
use fde::resonance::analyze;

fn main() -> fde::Result<()> {
    let prob = duffing_delay(ExampleParams::default())?;
    let report = analyze(&prob)?;
    let w = phase_element(&report, 0.3)?;
    let s = [1e1, 1e2, 1e3, 1e4, 1e5];
    println!("{:>8} {:>12} {:>12} {:>12}", "s", "field", "projected", "sqrt(c/s)");
    for p in gamma_convergence(&prob, &report, &w, &s)? {
        println!("{:>8.0e} {:>12.4e} {:>12.4e} {:>12.4e}", p.s, p.field_gap, p.projected_gap, (0.1739 / p.s).sqrt());
    }
    Ok(())
}
