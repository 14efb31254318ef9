//! Limit-map certificates for the delayed Duffing equation as the forcing
//! amplitude crosses the threshold `4/π`.

use fde::catalog::{duffing_delay, ExampleParams};
use fde::lazer_leach::{certify, ll_margin, DEFAULT_GRID};
use fde::resonance::analyze;

fn main() -> fde::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>7} {:>5}", "c", "R2", "N2", "LL", "degree", "pass");
    for c in [0.0, 0.5, 1.0, 1.2, 4.0 / std::f64::consts::PI, 1.4, 2.0] {
        let prob = duffing_delay(ExampleParams { m: 1, c })?;
        let report = analyze(&prob)?;
        let ll = certify(&prob, &report, 64, DEFAULT_GRID)?;
        println!(
            "{c:>6.3} {:>10.5} {:>10.5} {:>10.5} {:>7} {:>5}",
            ll.r2.margin.unwrap_or(f64::NAN),
            ll.n2.margin.unwrap_or(f64::NAN),
            ll_margin(&prob, &report)?,
            ll.r3.degree.map_or("-".to_string(), |d| d.to_string()),
            ll.pass()
        );
    }
    Ok(())
}
