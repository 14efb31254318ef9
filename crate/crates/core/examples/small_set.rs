//! Normalized measure of `{t : |w(t)| < ε}` for unit kernel elements, and a
//! fitted constant for the bound `C ε^{1/3}`.

use std::f64::consts::{PI, SQRT_2};

use fde::lazer_leach::{fit_power_bound, small_set_measure};
use fde::trigpoly::TrigPoly;

fn main() -> fde::Result<()> {
    let w = TrigPoly::scalar_cos_sin(1, SQRT_2, 0.0);
    for eps in [0.2, 0.1, 0.05, 0.01] {
        let exact = 2.0 / PI * (eps / SQRT_2).asin();
        println!("eps {eps:<5} measure {:.6}  arcsine {exact:.6}", small_set_measure(&w, eps)?);
    }

    let eps = [0.2, 0.1, 0.05];
    for phi in [0.0, 0.7, 2.0] {
        let w = TrigPoly::scalar_cos_sin(1, SQRT_2 * f64::cos(phi), SQRT_2 * f64::sin(phi));
        println!("phase {phi}: C = {:.4}", fit_power_bound(&w, &eps, 1.0 / 3.0)?);
    }
    Ok(())
}
