//! Finite signed measures on the torus `R/2πZ` and their Fourier transforms.
//!
//! Measures are restricted to a closed-form catalog: Dirac atoms plus
//! densities that are constant, sinusoidal or polynomial on an interval.
//! Every transform `λ̂(k) = ∫ e^{-iks} dλ(s)` is therefore exact.
//!
//! The deviating operator of a measure matrix acts on a trigonometric
//! polynomial as `(Λ̃u)(t) = ∫ dλ(s) u(t+s)`, which multiplies the `k`-th
//! coefficient by `λ̂(-k)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::TrigPoly;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub theta: f64,
    pub weight: f64,
}

impl Atom {
    /// `weight · e^{-ikθ}`.
    pub fn transform(&self, k: i64) -> Complex64 {
        Complex64::from_polar(self.weight, -(k as f64) * self.theta)
    }
}

/// Density profile as a function of the absolute location `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DensityProfile {
    /// `c`
    Const { c: f64 },
    /// `c · sin(omega·s + phase)`
    Sin {
        c: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `Σ coeffs[j] · s^j`
    Poly { coeffs: Vec<f64> },
}

impl DensityProfile {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Const { c } => *c,
            Self::Sin { c, omega, phase } => c * (omega * s + phase).sin(),
            Self::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &a| acc * s + a),
        }
    }

    /// Profile `s ↦ self(s - offset)`.
    fn translated(&self, offset: f64) -> Self {
        match self {
            Self::Const { c } => Self::Const { c: *c },
            Self::Sin { c, omega, phase } => Self::Sin {
                c: *c,
                omega: *omega,
                phase: phase - omega * offset,
            },
            Self::Poly { coeffs } => Self::Poly {
                coeffs: taylor_shift(coeffs, -offset),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Density {
    pub a: f64,
    pub b: f64,
    pub profile: DensityProfile,
}

impl Density {
    /// `∫_a^b e^{-iks} profile(s) ds`, in closed form.
    pub fn transform(&self, k: i64) -> Complex64 {
        let (a, b) = (self.a, self.b);
        let kf = k as f64;
        match &self.profile {
            DensityProfile::Const { c } => *c * exp_integral(-kf, a, b),
            DensityProfile::Sin { c, omega, phase } => {
                // c sin(x) = c (e^{ix} - e^{-ix}) / 2i
                let plus = Complex64::from_polar(1.0, *phase) * exp_integral(omega - kf, a, b);
                let minus = Complex64::from_polar(1.0, -phase) * exp_integral(-omega - kf, a, b);
                (plus - minus) * (*c / (2.0 * I))
            }
            DensityProfile::Poly { coeffs } => poly_exp_integral(coeffs, kf, a, b),
        }
    }

    /// `∫_a^b |profile(s)| ds`.
    pub fn total_variation(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        match &self.profile {
            DensityProfile::Const { c } => c.abs() * (b - a),
            DensityProfile::Sin { c, omega, phase } => {
                if *omega == 0.0 {
                    (c * phase.sin()).abs() * (b - a)
                } else {
                    let f = |x: f64| abs_sin_antiderivative(omega * x + phase);
                    c.abs() / omega.abs() * (f(b) - f(a)).abs()
                }
            }
            DensityProfile::Poly { coeffs } => poly_abs_integral(coeffs, a, b),
        }
    }
}

/// `∫_a^b e^{iαs} ds`, stable as `α(b-a) → 0`.
fn exp_integral(alpha: f64, a: f64, b: f64) -> Complex64 {
    let len = b - a;
    let x = alpha * len;
    let (sinc, vers) = if x.abs() < 1e-8 {
        (1.0 - x * x / 6.0, x / 2.0)
    } else {
        let h = (x / 2.0).sin();
        (x.sin() / x, 2.0 * h * h / x)
    };
    Complex64::from_polar(len, alpha * a) * Complex64::new(sinc, vers)
}

/// `∫_0^x |sin y| dy`, odd and non-decreasing.
fn abs_sin_antiderivative(x: f64) -> f64 {
    let q = (x / PI).floor();
    2.0 * q + 1.0 - (x - q * PI).cos()
}

/// Coefficients of `p(x + c)` given those of `p(x)`.
fn taylor_shift(coeffs: &[f64], c: f64) -> Vec<f64> {
    let d = coeffs.len();
    let mut out = vec![0.0; d];
    for (j, &pj) in coeffs.iter().enumerate() {
        // (x + c)^j = Σ_i C(j,i) c^{j-i} x^i
        let mut binom = 1.0;
        for i in (0..=j).rev() {
            out[i] += pj * binom * c.powi((j - i) as i32);
            binom = binom * i as f64 / (j - i + 1) as f64;
        }
    }
    out
}

fn poly_exp_integral(coeffs: &[f64], k: f64, a: f64, b: f64) -> Complex64 {
    if coeffs.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let local = taylor_shift(coeffs, c);
    let deg = local.len() - 1;
    // moments[j] = ∫_{-h}^{h} x^j e^{-ikx} dx
    let mut moments = vec![Complex64::new(0.0, 0.0); deg + 1];
    if k.abs() * h <= 4.0 {
        let beta = Complex64::new(0.0, -k);
        for (j, mj) in moments.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..120 {
                if n > 0 {
                    term *= beta / n as f64;
                }
                let p = j + n;
                if p % 2 == 0 {
                    let add = term * (2.0 * h.powi(p as i32 + 1) / (p + 1) as f64);
                    acc += add;
                    if n > 8 && add.norm() < 1e-18 * acc.norm().max(1e-300) {
                        break;
                    }
                }
            }
            *mj = acc;
        }
    } else {
        let beta = Complex64::new(0.0, -k);
        let ep = Complex64::from_polar(1.0, -k * h);
        let em = Complex64::from_polar(1.0, k * h);
        moments[0] = (ep - em) / beta;
        for j in 1..=deg {
            let hj = h.powi(j as i32);
            let mj = (-h).powi(j as i32);
            moments[j] = (ep * hj - em * mj) / beta - moments[j - 1] * (j as f64) / beta;
        }
    }
    let sum: Complex64 = local.iter().zip(&moments).map(|(d, m)| m * *d).sum();
    Complex64::from_polar(1.0, -k * c) * sum
}

fn poly_abs_integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let mut p: Vec<f64> = coeffs.to_vec();
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    let anti = |x: f64| -> f64 {
        p.iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (j, &c)| acc * x + c / (j + 1) as f64)
            * x
    };
    let mut cuts = vec![a];
    if p.len() > 2 || (p.len() == 2 && p[1] != 0.0) {
        let d = p.len() - 1;
        let lead = p[d];
        let mut comp = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -p[i] / lead;
        }
        let scale = 1.0 + p.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
        let mut roots: Vec<f64> = comp
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= 1e-9 * scale && z.re > a && z.re < b)
            .map(|z| z.re)
            .collect();
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.extend(roots);
    }
    cuts.push(b);
    cuts.windows(2).map(|w| (anti(w[1]) - anti(w[0])).abs()).sum()
}

/// A finite signed measure on the torus, normalized to `[0, 2π]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScalarMeasure {
    atoms: Vec<Atom>,
    densities: Vec<Density>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarMeasureJson {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    densities: Vec<Density>,
}

impl<'de> Deserialize<'de> for ScalarMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ScalarMeasureJson::deserialize(d)?;
        ScalarMeasure::new(raw.atoms, raw.densities).map_err(serde::de::Error::custom)
    }
}

impl ScalarMeasure {
    /// Normalizes atom locations into `[0, 2π)` and density supports into
    /// `[0, 2π]`. Intervals given as `[-τ, 0]` land on `[2π-τ, 2π]`, and an
    /// interval straddling zero is split.
    pub fn new(atoms: Vec<Atom>, densities: Vec<Density>) -> Result<Self> {
        let mut out = Self::default();
        for atom in atoms {
            if !atom.theta.is_finite() || !atom.weight.is_finite() {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
            let theta = atom.theta.rem_euclid(TAU);
            let theta = if theta >= TAU { 0.0 } else { theta };
            out.atoms.push(Atom { theta, ..atom });
        }
        for d in densities {
            out.push_density(d)?;
        }
        Ok(out)
    }

    fn push_density(&mut self, d: Density) -> Result<()> {
        let Density { a, b, profile } = d;
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidMeasure(format!("density interval [{a}, {b}] must have a < b")));
        }
        if b - a > TAU + 1e-12 {
            return Err(Error::InvalidMeasure(format!("density interval [{a}, {b}] is longer than 2π")));
        }
        if let DensityProfile::Poly { coeffs } = &profile {
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidMeasure("non-finite polynomial coefficient".into()));
            }
        }
        if a >= 0.0 && b <= TAU {
            self.densities.push(Density { a, b, profile });
        } else if a >= -TAU && b <= 0.0 {
            self.densities.push(Density {
                a: a + TAU,
                b: b + TAU,
                profile: profile.translated(TAU),
            });
        } else if a < 0.0 && b > 0.0 && a >= -TAU {
            self.densities.push(Density {
                a: a + TAU,
                b: TAU,
                profile: profile.translated(TAU),
            });
            self.densities.push(Density { a: 0.0, b, profile });
        } else if (0.0..TAU).contains(&a) && b > TAU {
            self.densities.push(Density { a, b: TAU, profile: profile.clone() });
            self.densities.push(Density {
                a: 0.0,
                b: b - TAU,
                profile: profile.translated(-TAU),
            });
        } else {
            return Err(Error::InvalidMeasure(format!(
                "density interval [{a}, {b}] must lie within [-2π, 2π]"
            )));
        }
        Ok(())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(theta: f64, weight: f64) -> Self {
        Self::new(vec![Atom { theta, weight }], vec![]).expect("finite atom")
    }

    /// Discrete delay `u ↦ weight · u(t - tau)`, i.e. an atom at `2π - tau`.
    pub fn delay(tau: f64, weight: f64) -> Self {
        Self::dirac(-tau, weight)
    }

    /// Density on `[a, b]`; negative intervals are wrapped.
    pub fn density(a: f64, b: f64, profile: DensityProfile) -> Result<Self> {
        Self::new(vec![], vec![Density { a, b, profile }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[Density] {
        &self.densities
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().all(|a| a.weight == 0.0) && self.densities.is_empty()
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.atoms.extend_from_slice(&other.atoms);
        self.densities.extend_from_slice(&other.densities);
        self
    }

    pub fn scaled(&self, s: f64) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom { weight: a.weight * s, ..*a }).collect();
        let densities = self
            .densities
            .iter()
            .map(|d| Density {
                profile: match &d.profile {
                    DensityProfile::Const { c } => DensityProfile::Const { c: c * s },
                    DensityProfile::Sin { c, omega, phase } => DensityProfile::Sin {
                        c: c * s,
                        omega: *omega,
                        phase: *phase,
                    },
                    DensityProfile::Poly { coeffs } => DensityProfile::Poly {
                        coeffs: coeffs.iter().map(|c| c * s).collect(),
                    },
                },
                ..d.clone()
            })
            .collect();
        Self { atoms, densities }
    }

    pub fn transform(&self, k: i64) -> Complex64 {
        self.atoms.iter().map(|a| a.transform(k)).sum::<Complex64>()
            + self.densities.iter().map(|d| d.transform(k)).sum::<Complex64>()
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.abs()).sum::<f64>()
            + self.densities.iter().map(Density::total_variation).sum::<f64>()
    }
}

/// `λ̂(k)` for one frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformValue {
    pub k: i64,
    pub value: DMatrix<Complex64>,
}

/// An `N×N` matrix of scalar measures representing a delay operator.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureMatrix {
    n: usize,
    entries: Vec<ScalarMeasure>,
}

impl MeasureMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![ScalarMeasure::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<ScalarMeasure>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "measure matrix row",
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn scalar(m: ScalarMeasure) -> Self {
        Self { n: 1, entries: vec![m] }
    }

    pub fn diagonal(diag: Vec<ScalarMeasure>) -> Self {
        let n = diag.len();
        let mut out = Self::zero(n);
        for (i, m) in diag.into_iter().enumerate() {
            out.entries[i * n + i] = m;
        }
        out
    }

    /// `A · δ_0`, the operator `u ↦ A u(t)`.
    pub fn pointwise(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 {
                    out.entries[i * n + j] = ScalarMeasure::dirac(0.0, a[(i, j)]);
                }
            }
        }
        out
    }

    /// The same scalar measure on every diagonal entry.
    pub fn scalar_identity(n: usize, m: &ScalarMeasure) -> Self {
        Self::diagonal(vec![m.clone(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarMeasure {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ScalarMeasure::is_zero)
    }

    pub fn transform(&self, k: i64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).transform(k))
    }

    pub fn matrix_transform(&self, k: i64) -> TransformValue {
        TransformValue {
            k,
            value: self.transform(k),
        }
    }

    pub fn total_variation_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).total_variation())
    }

    /// Uniform bound `B ≥ ‖λ̂(k)‖₂` for every `k`: the Frobenius norm of the
    /// entrywise total variation.
    pub fn total_variation_bound(&self) -> f64 {
        self.total_variation_matrix().norm()
    }

    /// `(Λ̃u)(t) = ∫ dλ(s) u(t+s)`: coefficient `k` is multiplied by `λ̂(-k)`.
    pub fn apply_deviation(&self, u: &TrigPoly) -> Result<TrigPoly> {
        if u.n() != self.n {
            return Err(Error::DimensionMismatch {
                what: "deviation argument",
                expected: self.n,
                found: u.n(),
            });
        }
        Ok(u.map_modes(|k, c| self.transform(-(k as i64)) * c))
    }

    /// Pointwise `(Λ̃u)(t)`: atoms by direct point evaluation, densities by
    /// their closed-form mode integrals.
    pub fn apply_at(&self, u: &TrigPoly, t: f64) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        let kmax = u.kmax() as i64;
        for i in 0..n {
            for j in 0..n {
                let m = self.entry(i, j);
                for atom in &m.atoms {
                    out[i] += atom.weight * u.eval(t + atom.theta)[j];
                }
                if !m.densities.is_empty() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in -kmax..=kmax {
                        let dk: Complex64 = m.densities.iter().map(|d| d.transform(-k)).sum();
                        acc += u.coeff(k)[j] * dk * Complex64::from_polar(1.0, k as f64 * t);
                    }
                    out[i] += acc.re;
                }
            }
        }
        out
    }
}

impl Serialize for MeasureMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[ScalarMeasure]> = self.entries.chunks(self.n.max(1)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeasureMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<ScalarMeasure>>::deserialize(d)?;
        MeasureMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn atom_transforms() {
        close(Atom { theta: 0.0, weight: 1.0 }.transform(5), 1.0.into(), 1e-15);
        close(Atom { theta: 1.5 * PI, weight: 1.0 }.transform(1), I, 1e-15);
        close(Atom { theta: PI, weight: -2.0 }.transform(2), (-2.0).into(), 1e-14);
    }

    #[test]
    fn uniform_density_on_negative_half() {
        let m = ScalarMeasure::density(-PI, 0.0, DensityProfile::Const { c: 1.0 }).unwrap();
        assert_eq!(m.densities()[0].a, PI);
        assert_eq!(m.densities()[0].b, TAU);
        close(m.transform(0), PI.into(), 1e-14);
        close(m.transform(1), 2.0 * I, 1e-14);
    }

    #[test]
    fn sine_density_kernel_value() {
        let m = ScalarMeasure::density(
            -PI,
            0.0,
            DensityProfile::Sin { c: -(4.0 / PI) * 0.5, omega: 1.0, phase: 0.0 },
        )
        .unwrap();
        close(m.transform(-1), -I, 1e-14);
    }

    #[test]
    fn pointwise_matrix_transform_is_constant() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 3.0]);
        let lam = MeasureMatrix::pointwise(&a);
        for k in [-7, 0, 3, 40] {
            let t = lam.transform(k);
            assert_abs_diff_eq!((t - a.map(Complex64::from)).norm(), 0.0, epsilon = 1e-15);
        }
        assert_eq!(MeasureMatrix::zero(2).transform(3), DMatrix::zeros(2, 2));
    }

    #[test]
    fn delay_consistency() {
        let lam = MeasureMatrix::scalar(ScalarMeasure::delay(PI / 2.0, 1.0));
        let atom = Atom { theta: 1.5 * PI, weight: 1.0 };
        close(lam.transform(1)[(0, 0)], atom.transform(1), 1e-15);
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(MeasureMatrix::scalar(ScalarMeasure::dirac(0.0, 1.0)).total_variation_bound(), 1.0);
        let u = ScalarMeasure::density(-PI, 0.0, DensityProfile::Const { c: 1.0 }).unwrap();
        assert_abs_diff_eq!(MeasureMatrix::scalar(u).total_variation_bound(), PI, epsilon = 1e-14);
        let s = ScalarMeasure::density(0.0, TAU, DensityProfile::Sin { c: 0.5, omega: 1.0, phase: 0.3 }).unwrap();
        let lam = MeasureMatrix::diagonal(vec![ScalarMeasure::dirac(1.0, 2.0), s]);
        assert_abs_diff_eq!(lam.total_variation_bound(), 8f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn poly_total_variation_with_sign_change() {
        // |s - 1| on [0, 3] has mass 1/2 + 2
        let p = Density { a: 0.0, b: 3.0, profile: DensityProfile::Poly { coeffs: vec![-1.0, 1.0] } };
        assert_abs_diff_eq!(p.total_variation(), 2.5, epsilon = 1e-13);
        // |s² - 2| on [0, 2]
        let q = Density { a: 0.0, b: 2.0, profile: DensityProfile::Poly { coeffs: vec![-2.0, 0.0, 1.0] } };
        let r = 2f64.sqrt();
        let exact = (2.0 * r - r.powi(3) / 3.0) + ((8.0 / 3.0 - 4.0) - (r.powi(3) / 3.0 - 2.0 * r));
        assert_abs_diff_eq!(q.total_variation(), exact, epsilon = 1e-12);
    }

    #[test]
    fn delay_shifts_cosine_to_sine() {
        let lam = MeasureMatrix::scalar(ScalarMeasure::delay(PI / 2.0, 1.0));
        let u = TrigPoly::scalar_cos_sin(1, 1.0, 0.0);
        let v = lam.apply_deviation(&u).unwrap();
        let sin = TrigPoly::scalar_cos_sin(1, 0.0, 1.0);
        assert_abs_diff_eq!((&v - &sin).l2_norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn deviation_dimension_mismatch() {
        let lam = MeasureMatrix::zero(2);
        assert!(matches!(
            lam.apply_deviation(&TrigPoly::zeros(1, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn straddling_interval_is_split() {
        let m = ScalarMeasure::density(-1.0, 1.0, DensityProfile::Poly { coeffs: vec![0.5, 2.0] }).unwrap();
        assert_eq!(m.densities().len(), 2);
        // ∫_{-1}^{1} (0.5 + 2s) e^{-iks} ds at k = 0 is 1
        close(m.transform(0), 1.0.into(), 1e-13);
        // profile values preserved across the wrap
        let d = &m.densities()[0];
        assert_abs_diff_eq!(d.profile.eval(TAU - 0.5), 0.5 + 2.0 * -0.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(ScalarMeasure::density(1.0, 1.0, DensityProfile::Const { c: 1.0 }).is_err());
        assert!(ScalarMeasure::density(-7.0, -6.5, DensityProfile::Const { c: 1.0 }).is_err());
    }

    #[test]
    fn json_fragment() {
        let text = r#"{"atoms":[{"theta":0.5,"weight":2}],
            "densities":[{"a":-1,"b":0,"profile":{"kind":"sin","c":1,"omega":2}}]}"#;
        let m: ScalarMeasure = serde_json::from_str(text).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_abs_diff_eq!(m.densities()[0].a, TAU - 1.0, epsilon = 1e-15);
        let back: ScalarMeasure = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
