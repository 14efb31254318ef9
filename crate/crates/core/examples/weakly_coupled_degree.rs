//! Degree of the projected limit map for a weakly coupled pair of
//! oscillators, computed block by block and by winding.

use fde::catalog::{duffing_delay, weakly_coupled, ExampleParams};
use fde::lazer_leach::{componentwise_blocks, degree_product, degree_winding, DEFAULT_GRID};
use fde::resonance::analyze;

fn main() -> fde::Result<()> {
    let prob = weakly_coupled(ExampleParams::default())?;
    let report = analyze(&prob)?;
    for b in componentwise_blocks(&prob, &report)? {
        println!(
            "block k={} component {}: jump {:.3} forcing {:?} margin {:.4}",
            b.k, b.component, b.jump, b.forcing, b.margin
        );
    }
    // Winding needs a one-dimensional kernel; the pair has 2nu = 4.
    println!("weakly coupled degree (product) = {}", degree_product(&prob, &report, DEFAULT_GRID)?);

    let duffing = duffing_delay(ExampleParams::default())?;
    let r = analyze(&duffing)?;
    println!("duffing degree (winding) = {}", degree_winding(&duffing, &r, 256, DEFAULT_GRID)?);
    println!("duffing degree (product) = {}", degree_product(&duffing, &r, DEFAULT_GRID)?);
    Ok(())
}
