//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fde::trigpoly::{CVector, TrigPoly};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes.
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * K15_WEIGHTS[7];
    let mut g = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let x = r * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += s * K15_WEIGHTS[i];
        if i % 2 == 1 {
            g += s * G7_WEIGHTS[i / 2];
        }
    }
    (k * r, ((k - g) * r).norm())
}

/// Adaptive Gauss-Kronrod quadrature of a complex integrand.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(&f, a, b, tol, 0)
}

/// `∫_a^b e^{-iks} β(s) ds`.
pub fn fourier_of_density<F: Fn(f64) -> f64>(beta: F, a: f64, b: f64, k: i64) -> Complex64 {
    integrate(|s| Complex64::from_polar(beta(s), -(k as f64) * s), a, b, 1e-12)
}

/// Method of steps for `u'' = f(t, u, u', u(t - tau))` with classical RK4.
///
/// `history(t)` gives `(u, u')` for `t ≤ 0`; past values of the computed
/// trajectory are recovered with cubic Hermite interpolation. Returns the
/// trajectory at `t_i = i·h`, `i = 0..=steps`.
pub fn method_of_steps<F, H>(f: F, history: H, tau: f64, h: f64, steps: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64, f64, f64, f64) -> f64,
    H: Fn(f64) -> (f64, f64),
{
    assert!(tau >= h);
    let (u0, v0) = history(0.0);
    let mut u = vec![u0];
    let mut v = vec![v0];
    let delayed = |u: &[f64], v: &[f64], t: f64| -> f64 {
        let s = t - tau;
        if s <= 0.0 {
            return history(s).0;
        }
        let i = ((s / h).floor() as usize).min(u.len() - 2);
        let x = s / h - i as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x),
            x * (1.0 - x) * (1.0 - x),
            x * x * (3.0 - 2.0 * x),
            x * x * (x - 1.0),
        );
        h00 * u[i] + h10 * h * v[i] + h01 * u[i + 1] + h11 * h * v[i + 1]
    };
    for n in 0..steps {
        let t = n as f64 * h;
        let (un, vn) = (u[n], v[n]);
        let acc = |tt: f64, uu: f64, vv: f64| f(tt, uu, vv, delayed(&u, &v, tt));
        let k1 = (vn, acc(t, un, vn));
        let k2 = (vn + 0.5 * h * k1.1, acc(t + 0.5 * h, un + 0.5 * h * k1.0, vn + 0.5 * h * k1.1));
        let k3 = (vn + 0.5 * h * k2.1, acc(t + 0.5 * h, un + 0.5 * h * k2.0, vn + 0.5 * h * k2.1));
        let k4 = (vn + h * k3.1, acc(t + h, un + h * k3.0, vn + h * k3.1));
        u.push(un + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0));
        v.push(vn + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1));
    }
    u.iter().enumerate().map(|(i, &x)| (i as f64 * h, x)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real trigonometric polynomial with coefficients uniform in the unit box.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, kmax: usize) -> TrigPoly {
    let mut coeffs = Vec::with_capacity(kmax + 1);
    coeffs.push(CVector::from_fn(n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)));
    for _ in 1..=kmax {
        coeffs.push(CVector::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }));
    }
    TrigPoly::from_coeffs(n, coeffs).expect("valid coefficients")
}
