// Two-component first-order system. Only the first component resonates;
// the time-dependent perturbation acts on the second one.

use fde::catalog::{gompertz_system, ExampleParams};
use fde::lazer_leach::{certify, DEFAULT_GRID};
use fde::resonance::analyze;
use fde::solver::solve;

fn main() -> fde::Result<()> {
    let prob = gompertz_system(ExampleParams::default())?;
    let report = analyze(&prob)?;
    println!("K = {:?}, kernel dimension {}", report.resonant, report.kernel_dim());
    for b in report.positive_blocks() {
        let th: Vec<String> = b.theta[0].iter().map(|z| format!("{:.3}", z)).collect();
        println!("theta at k = {}: [{}]", b.k, th.join(", "));
    }

    let ll = certify(&prob, &report, 64, DEFAULT_GRID)?;
    println!("certificates pass: {}", ll.pass());

    let res = solve(&prob, &report, &prob.solve.clone().unwrap_or_default())?;
    println!("converged {} in {} iterations", res.converged, res.iterations);
    for j in 0..2 {
        let c = res.u.coeff(1);
        println!("u_{j} first harmonic {:.6}", c[j]);
    }
    Ok(())
}
