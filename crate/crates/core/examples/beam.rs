//! Fourth-order beam-type equation with two resonant frequencies, so the
//! kernel is four-dimensional and the sphere is sampled quasi-randomly.

use fde::catalog::{beam, ExampleParams};
use fde::lazer_leach::{certify, DEFAULT_GRID};
use fde::resonance::analyze;
use fde::solver::solve;

fn main() -> fde::Result<()> {
    let prob = beam(ExampleParams::default())?;
    let report = analyze(&prob)?;
    println!("K = {:?}, 2nu = {}", report.resonant, report.kernel_dim());

    let ll = certify(&prob, &report, 256, DEFAULT_GRID)?;
    println!("{}", serde_json::to_string_pretty(&ll.to_json()["certificates"]).unwrap());

    let res = solve(&prob, &report, &prob.solve.clone().unwrap_or_default())?;
    println!("converged {} with residual {:.2e}", res.converged, res.pointwise_residual);
    Ok(())
}
