//! Resonant set, kernel basis and linear hypotheses for every built-in problem.
//!
//!     cargo run --example analyze

use fde::catalog::{emit_example, ExampleId, ExampleParams};
use fde::resonance::analyze;

fn main() -> fde::Result<()> {
    for id in ExampleId::ALL {
        let prob = emit_example(id, ExampleParams::default())?;
        let report = analyze(&prob)?;
        let cond = report.conditions.as_ref().expect("conditions are always checked");
        println!(
            "{id:<20} K = {:?}  2nu = {}  k* = {}  L1..L4 = {} {} {} {}",
            report.resonant,
            report.kernel_dim(),
            report.bound.k_star,
            cond.l1,
            cond.l2,
            cond.l3,
            cond.l4
        );
        for b in report.positive_blocks() {
            println!("    k = {}  sigma_min = {:.2e}  nu_k = {}", b.k, b.sigma_min, b.nu());
        }
    }
    Ok(())
}
