//! Distributed-delay equations `u' + α∫β u + g(∫β u) = c cos(mt)` for
//! the uniform and sine kernels at several resonant frequencies.

use fde::catalog::{distributed_sine, distributed_uniform, ExampleParams};
use fde::resonance::analyze;
use fde::solver::solve;

fn main() -> fde::Result<()> {
    for m in 1..=3 {
        let params = ExampleParams { m, c: 0.5 };
        for (name, prob) in [("uniform", distributed_uniform(params)?), ("sine", distributed_sine(params)?)] {
            let report = analyze(&prob)?;
            print!("m = {m} {name:<8} K = {:?}", report.resonant);
            if report.nu() == 0 {
                println!("  (nonresonant)");
                continue;
            }
            let res = solve(&prob, &report, &prob.solve.clone().unwrap_or_default())?;
            println!("  converged {}  residual {:.1e}", res.converged, res.pointwise_residual);
        }
    }
    Ok(())
}
