//! Real vector-valued trigonometric polynomials on the torus.
//!
//! A [`TrigPoly`] stores the Fourier coefficients `c_0, ..., c_K` of an
//! `R^N`-valued 2π-periodic function under the normalized Haar convention
//! `c_k = (1/2π) ∫ u(t) e^{-ikt} dt`. Negative modes are implicit:
//! `c_{-k} = conj(c_k)`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Imaginary drift of `c_0` tolerated before a warning is logged.
const REALNESS_DRIFT: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(m: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(m)
        } else {
            p.plan_fft_forward(m)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    n: usize,
    coeffs: Vec<CVector>,
}

impl TrigPoly {
    pub fn zeros(n: usize, kmax: usize) -> Self {
        Self {
            n,
            coeffs: vec![CVector::zeros(n); kmax + 1],
        }
    }

    pub fn constant(value: &[f64]) -> Self {
        let mut u = Self::zeros(value.len(), 0);
        u.coeffs[0] = CVector::from_iterator(value.len(), value.iter().map(|&x| x.into()));
        u
    }

    /// Builds a polynomial from the non-negative modes `c_0..c_K`.
    pub fn from_coeffs(n: usize, coeffs: Vec<CVector>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Semantic("a trigonometric polynomial needs at least c_0".into()));
        }
        for c in &coeffs {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "Fourier coefficient",
                    expected: n,
                    found: c.len(),
                });
            }
        }
        let mut u = Self { n, coeffs };
        u.realify();
        Ok(u)
    }

    /// `Re(amp · e^{ikt}) · 2` in every component, i.e. the real function whose
    /// `k`-th coefficient is `amp`.
    pub fn mode(n: usize, k: usize, amp: CVector) -> Self {
        assert_eq!(amp.len(), n);
        let mut u = Self::zeros(n, k);
        u.coeffs[k] = amp;
        u.realify();
        u
    }

    /// Scalar `a cos(kt) + b sin(kt)`.
    pub fn scalar_cos_sin(k: usize, a: f64, b: f64) -> Self {
        let amp = if k == 0 {
            Complex64::new(a, 0.0)
        } else {
            Complex64::new(a / 2.0, -b / 2.0)
        };
        Self::mode(1, k, CVector::from_element(1, amp))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CVector] {
        &self.coeffs
    }

    /// Coefficient at any signed frequency; zero outside the truncation.
    pub fn coeff(&self, k: i64) -> CVector {
        let a = k.unsigned_abs() as usize;
        match self.coeffs.get(a) {
            Some(c) if k >= 0 => c.clone(),
            Some(c) => c.map(|z| z.conj()),
            None => CVector::zeros(self.n),
        }
    }

    pub fn set_coeff(&mut self, k: usize, c: CVector) {
        assert_eq!(c.len(), self.n);
        if k > self.kmax() {
            self.coeffs.resize(k + 1, CVector::zeros(self.n));
        }
        self.coeffs[k] = c;
        if k == 0 {
            self.realify();
        }
    }

    pub fn coeffs_mut(&mut self) -> &mut [CVector] {
        &mut self.coeffs
    }

    fn realify(&mut self) {
        let drift = self.coeffs[0].iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if drift > REALNESS_DRIFT {
            log::warn!("mean coefficient had imaginary drift {drift:e}; zeroed");
        }
        for z in self.coeffs[0].iter_mut() {
            z.im = 0.0;
        }
    }

    /// Truncates or zero-pads to a new order.
    pub fn with_kmax(&self, kmax: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(kmax + 1, CVector::zeros(self.n));
        Self { n: self.n, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|z| *z == C0))
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        let mut out = self.coeffs[0].map(|z| z.re);
        let step = Complex64::from_polar(1.0, t);
        let mut e = Complex64::new(1.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            // Recompute periodically to keep the recurrence from drifting.
            e = if k % 16 == 0 {
                Complex64::from_polar(1.0, k as f64 * t)
            } else {
                e * step
            };
            for i in 0..self.n {
                out[i] += 2.0 * (c[i] * e).re;
            }
        }
        out
    }

    /// Samples at `t_j = 2πj/m`, `j = 0..m`.
    pub fn eval_grid(&self, m: usize) -> Result<Vec<DVector<f64>>> {
        let required = 2 * self.kmax() + 1;
        if m < required {
            return Err(Error::GridTooSmall { m, required });
        }
        let fft = plan(m, true);
        let mut out = vec![DVector::zeros(self.n); m];
        let mut buf = vec![C0; m];
        for i in 0..self.n {
            buf.iter_mut().for_each(|z| *z = C0);
            for (k, c) in self.coeffs.iter().enumerate() {
                buf[k] = c[i];
                if k > 0 {
                    buf[m - k] = c[i].conj();
                }
            }
            fft.process(&mut buf);
            for (j, z) in buf.iter().enumerate() {
                out[j][i] = z.re;
            }
        }
        Ok(out)
    }

    /// Trigonometric interpolant of grid samples, truncated at `kmax`.
    pub fn analyze_grid(samples: &[DVector<f64>], kmax: usize) -> Result<Self> {
        let m = samples.len();
        let required = 2 * kmax + 1;
        if m < required {
            return Err(Error::GridTooSmall { m, required });
        }
        let n = samples[0].len();
        let fft = plan(m, false);
        let mut coeffs = vec![CVector::zeros(n); kmax + 1];
        let mut buf = vec![C0; m];
        let scale = 1.0 / m as f64;
        for i in 0..n {
            for (j, s) in samples.iter().enumerate() {
                buf[j] = Complex64::new(s[i], 0.0);
            }
            fft.process(&mut buf);
            for (k, c) in coeffs.iter_mut().enumerate() {
                c[i] = buf[k] * scale;
            }
        }
        let mut u = Self { n, coeffs };
        u.realify();
        Ok(u)
    }

    /// `(u | v)_{L²}` with the normalized Haar measure, via Parseval.
    pub fn l2_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.n, other.n, "dimension mismatch in l2_inner");
        let k = self.kmax().min(other.kmax());
        let mut acc = self.coeffs[0].dotc(&other.coeffs[0]).conj();
        for kk in 1..=k {
            let a = &self.coeffs[kk];
            let b = &other.coeffs[kk];
            // Sum over ±k: <a,b> + <conj a, conj b>.
            let z = b.dotc(a);
            acc += z + z.conj();
        }
        acc
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).re.max(0.0).sqrt()
    }

    /// Sobolev-type norm `sqrt(Σ (1+k²)^m |c_k|²)`.
    pub fn h_norm(&self, m: u32) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let w = (1.0 + (k * k) as f64).powi(m as i32);
            let mult = if k == 0 { 1.0 } else { 2.0 };
            acc += mult * w * c.norm_squared();
        }
        acc.sqrt()
    }

    pub fn differentiate(&self, order: u32) -> Self {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            let f = Complex64::new(0.0, k as f64).powu(order);
            *c *= f;
        }
        if order > 0 {
            out.coeffs[0].fill(C0);
        }
        out
    }

    /// `t ↦ u(t + c)`.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for (k, v) in out.coeffs.iter_mut().enumerate().skip(1) {
            *v *= Complex64::from_polar(1.0, k as f64 * c);
        }
        out
    }

    /// Applies a per-mode matrix-free map `c_k ↦ f(k, c_k)` for `k ≥ 0`.
    pub fn map_modes(&self, mut f: impl FnMut(usize, &CVector) -> CVector) -> Self {
        let coeffs: Vec<CVector> = self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect();
        let n = coeffs[0].len();
        let mut u = Self { n, coeffs };
        u.realify();
        u
    }

    pub fn sup_on_grid(&self, m: usize) -> Result<f64> {
        Ok(self
            .eval_grid(m)?
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    /// Packs into the real coordinate vector
    /// `[Re c_0; Re c_1; Im c_1; ...; Re c_K; Im c_K]`.
    pub fn to_real(&self) -> DVector<f64> {
        let n = self.n;
        let mut x = DVector::zeros(n * (2 * self.kmax() + 1));
        for i in 0..n {
            x[i] = self.coeffs[0][i].re;
        }
        for k in 1..=self.kmax() {
            let base = n * (2 * k - 1);
            for i in 0..n {
                x[base + i] = self.coeffs[k][i].re;
                x[base + n + i] = self.coeffs[k][i].im;
            }
        }
        x
    }

    pub fn from_real(n: usize, kmax: usize, x: &DVector<f64>) -> Self {
        assert_eq!(x.len(), n * (2 * kmax + 1));
        let mut u = Self::zeros(n, kmax);
        for i in 0..n {
            u.coeffs[0][i] = x[i].into();
        }
        for k in 1..=kmax {
            let base = n * (2 * k - 1);
            for i in 0..n {
                u.coeffs[k][i] = Complex64::new(x[base + i], x[base + n + i]);
            }
        }
        u
    }

    /// CSV with header `t,u1,...,uN` over `m` grid points.
    pub fn to_csv(&self, m: usize) -> Result<String> {
        let samples = self.eval_grid(m)?;
        let mut s = String::from("t");
        for i in 1..=self.n {
            write!(s, ",u{i}").unwrap();
        }
        s.push('\n');
        for (j, v) in samples.iter().enumerate() {
            write!(s, "{}", 2.0 * PI * j as f64 / m as f64).unwrap();
            for x in v.iter() {
                write!(s, ",{x}").unwrap();
            }
            s.push('\n');
        }
        Ok(s)
    }

    fn binary(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let kmax = self.kmax().max(other.kmax());
        let a = self.with_kmax(kmax);
        let b = other.with_kmax(kmax);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.zip_map(y, &f))
            .collect();
        Self { n: self.n, coeffs }
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.binary(rhs, |a, b| a + b)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.binary(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, s: f64) -> TrigPoly {
        self.map_modes(|_, c| c * Complex64::new(s, 0.0))
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self * -1.0
    }
}

#[derive(Serialize, Deserialize)]
struct ModeJson {
    k: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    n: usize,
    kmax: usize,
    coeffs: Vec<ModeJson>,
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, c)| *k == 0 || c.iter().any(|z| *z != C0))
            .map(|(k, c)| ModeJson {
                k,
                re: c.iter().map(|z| z.re).collect(),
                im: c.iter().map(|z| z.im).collect(),
            })
            .collect();
        TrigPolyJson {
            n: self.n,
            kmax: self.kmax(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = TrigPolyJson::deserialize(d)?;
        let mut u = TrigPoly::zeros(j.n, j.kmax);
        for m in j.coeffs {
            if m.k > j.kmax {
                return Err(D::Error::custom(format!("mode k={} exceeds kmax={}", m.k, j.kmax)));
            }
            if m.re.len() != j.n || m.im.len() != j.n {
                return Err(D::Error::custom(format!(
                    "mode k={} must have {} real and imaginary parts",
                    m.k, j.n
                )));
            }
            u.coeffs[m.k] =
                CVector::from_iterator(j.n, m.re.iter().zip(&m.im).map(|(&a, &b)| Complex64::new(a, b)));
        }
        u.realify();
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_on_four_points() {
        let u = TrigPoly::scalar_cos_sin(1, 1.0, 0.0);
        let s = u.eval_grid(4).unwrap();
        let vals: Vec<f64> = s.iter().map(|v| v[0]).collect();
        for (a, b) in vals.iter().zip([1.0, 0.0, -1.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn constant_grid() {
        let u = TrigPoly::constant(&[2.5, -1.0]);
        for v in u.eval_grid(7).unwrap() {
            assert_eq!(v.as_slice(), &[2.5, -1.0]);
        }
    }

    #[test]
    fn grid_too_small() {
        let u = TrigPoly::scalar_cos_sin(3, 1.0, 0.0);
        assert!(matches!(u.eval_grid(6), Err(Error::GridTooSmall { required: 7, .. })));
    }

    #[test]
    fn analyze_sqrt2_cos() {
        let m = 32;
        let s: Vec<_> = (0..m)
            .map(|j| DVector::from_element(1, 2f64.sqrt() * (2.0 * PI * j as f64 / m as f64).cos()))
            .collect();
        let u = TrigPoly::analyze_grid(&s, 4).unwrap();
        assert_abs_diff_eq!(u.coeff(1)[0].re, 2f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.coeff(1)[0].im, 0.0, epsilon = 1e-15);
        let ones: Vec<_> = (0..m).map(|_| DVector::from_element(1, 1.0)).collect();
        let one = TrigPoly::analyze_grid(&ones, 4).unwrap();
        assert_abs_diff_eq!(one.coeff(0)[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn inner_products() {
        let c = TrigPoly::scalar_cos_sin(3, 2f64.sqrt(), 0.0);
        assert_abs_diff_eq!(c.l2_inner(&c).re, 1.0, epsilon = 1e-15);
        let cos = TrigPoly::scalar_cos_sin(1, 1.0, 0.0);
        let sin = TrigPoly::scalar_cos_sin(1, 0.0, 1.0);
        assert_abs_diff_eq!(cos.l2_inner(&sin).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn derivatives() {
        let cos = TrigPoly::scalar_cos_sin(1, 1.0, 0.0);
        let d = cos.differentiate(1);
        let minus_sin = TrigPoly::scalar_cos_sin(1, 0.0, -1.0);
        assert_abs_diff_eq!((&d - &minus_sin).l2_norm(), 0.0, epsilon = 1e-15);
        assert!(TrigPoly::constant(&[3.0]).differentiate(2).is_zero());
        let u = TrigPoly::scalar_cos_sin(3, 1.0, 0.0);
        let r = &u.differentiate(2) + &(&u * 9.0);
        assert_abs_diff_eq!(r.l2_norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn shift_is_translation() {
        let u = TrigPoly::scalar_cos_sin(2, 0.3, -1.2);
        let c = 0.77;
        let v = u.shift(c);
        for t in [0.0, 0.4, 2.0, 5.5] {
            assert_abs_diff_eq!(v.eval(t)[0], u.eval(t + c)[0], epsilon = 1e-14);
        }
    }

    #[test]
    fn real_packing_roundtrip() {
        let mut u = TrigPoly::zeros(2, 3);
        u.set_coeff(2, CVector::from_vec(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)]));
        u.set_coeff(0, CVector::from_vec(vec![Complex64::new(4.0, 0.0), Complex64::new(-1.0, 0.0)]));
        let x = u.to_real();
        assert_eq!(TrigPoly::from_real(2, 3, &x), u);
    }

    #[test]
    fn json_roundtrip() {
        let mut u = TrigPoly::zeros(2, 4);
        u.set_coeff(3, CVector::from_vec(vec![Complex64::new(0.1, -0.3), Complex64::new(0.0, 1.0)]));
        let s = serde_json::to_string(&u).unwrap();
        let back: TrigPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn csv_header() {
        let u = TrigPoly::constant(&[1.0, 2.0]);
        let csv = u.to_csv(4).unwrap();
        assert!(csv.starts_with("t,u1,u2\n0,1,2\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
