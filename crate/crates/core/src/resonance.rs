//! Symbols `L_k = P(ik) + λ̂(-k)`, the resonant set, kernel bases and the
//! kernel projection / right inverse built from them.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MeasureMatrix;
use crate::problem::{MatrixPolynomial, ProblemSpec};
use crate::trigpoly::{CVector, TrigPoly};

/// Relative gate: `k ∈ 𝒦` iff `σ_min(L_k) < RESONANCE_TOL · (1 + ‖L_k‖)`.
pub const RESONANCE_TOL: f64 = 1e-9;
/// Largest scan bound accepted before the input is declared ill-scaled.
pub const SCAN_CAP: u64 = 1_000_000;
/// Principal-angle threshold for the kernel/cokernel comparison.
pub const L2_TOL: f64 = 1e-8;
/// Threshold on `|det ψ̂(k)|`.
pub const L3_TOL: f64 = 1e-9;
/// Residual threshold for invariance of the kernel under `ψ̂(-k)`.
pub const L4_TOL: f64 = 1e-10;
/// Basis entries below this magnitude are snapped to zero.
const SNAP: f64 = 1e-14;

pub fn symbol(poly: &MatrixPolynomial, lambda: &MeasureMatrix, k: i64) -> DMatrix<Complex64> {
    poly.eval(Complex64::new(0.0, k as f64)) + lambda.transform(-k)
}

fn gate(op_norm: f64, tol: f64) -> f64 {
    tol * (1.0 + op_norm)
}

/// Singular values in descending order with matching right singular vectors.
fn sorted_svd(l: &DMatrix<Complex64>) -> (Vec<f64>, Vec<CVector>, Vec<CVector>) {
    let svd = l.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^H");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let left = idx.iter().map(|&i| u.column(i).into_owned()).collect();
    let right = idx.iter().map(|&i| vt.row(i).adjoint()).collect();
    (sv, left, right)
}

fn sigma_min(l: &DMatrix<Complex64>) -> f64 {
    l.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

fn fix_phase(mut v: CVector) -> CVector {
    for z in v.iter_mut() {
        if z.norm() < SNAP {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    let (mut best, mut mag) = (0, -1.0);
    for (i, z) in v.iter().enumerate() {
        if z.norm() > mag + SNAP {
            best = i;
            mag = z.norm();
        }
    }
    if mag > 0.0 {
        let phase = v[best] / mag;
        v /= phase;
        v[best] = Complex64::new(v[best].norm(), 0.0);
    }
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::from(norm);
    }
    v
}

/// Numerical kernel of `L` with the deterministic basis convention.
///
/// A zero matrix yields the identity columns; otherwise the right singular
/// vectors for singular values below the gate, each with its largest
/// entry made real positive.
pub fn kernel_data(l: &DMatrix<Complex64>, tol: f64) -> (usize, Vec<CVector>) {
    let n = l.nrows();
    let (sv, _, right) = sorted_svd(l);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        let basis = (0..n)
            .map(|i| CVector::from_fn(n, |r, _| if r == i { 1.0.into() } else { 0.0.into() }))
            .collect();
        return (n, basis);
    }
    let g = gate(smax, tol);
    let basis: Vec<CVector> = sv
        .iter()
        .zip(right)
        .filter(|(s, _)| **s < g)
        .map(|(_, v)| fix_phase(v))
        .collect();
    (basis.len(), basis)
}

/// `L^+ b` with singular values below the gate treated as zero.
fn pinv_solve(l: &DMatrix<Complex64>, b: &CVector, tol: f64) -> CVector {
    let (sv, left, right) = sorted_svd(l);
    let g = gate(sv.first().copied().unwrap_or(0.0), tol);
    let mut x = CVector::zeros(l.ncols());
    for ((s, u), v) in sv.iter().zip(&left).zip(&right) {
        if *s >= g && *s > 0.0 {
            x += v * (u.dotc(b) / *s);
        }
    }
    x
}

fn pinv_norm(l: &DMatrix<Complex64>, tol: f64) -> f64 {
    let sv = l.singular_values();
    let g = gate(sv.max(), tol);
    sv.iter().filter(|s| **s >= g && **s > 0.0).map(|s| 1.0 / s).fold(0.0, f64::max)
}

/// Quantitative version of the finiteness argument for `𝒦`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanBound {
    pub k_star: u64,
    /// `σ_min(A_m)`
    pub sigma_min_leading: f64,
    /// `‖A_j‖₂` for `j < m`
    pub lower_norms: Vec<f64>,
    pub total_variation: f64,
}

impl ScanBound {
    /// Lower bound on `σ_min(L_k)` valid for `|k| = k`.
    pub fn symbol_lower_bound(&self, k: f64) -> f64 {
        let m = self.lower_norms.len() as i32;
        let mut lb = self.sigma_min_leading * k.powi(m);
        for (j, a) in self.lower_norms.iter().enumerate() {
            lb -= a * k.powi(j as i32);
        }
        lb - self.total_variation
    }
}

/// Least `k*` with `σ_min(A_m) k^m - Σ_{j<m} ‖A_j‖ k^j > TV(Λ) + 1`.
pub fn scan_bound(poly: &MatrixPolynomial, lambda: &MeasureMatrix) -> Result<ScanBound> {
    let m = poly.degree();
    let coeffs = poly.coeffs();
    let sigma_min_leading = coeffs[m].singular_values().min();
    let lower_norms: Vec<f64> = coeffs[..m].iter().map(|a| a.singular_values().max()).collect();
    let mut bound = ScanBound {
        k_star: 0,
        sigma_min_leading,
        lower_norms,
        total_variation: lambda.total_variation_bound(),
    };
    for k in 1..=SCAN_CAP {
        if bound.symbol_lower_bound(k as f64) > 1.0 {
            bound.k_star = k;
            return Ok(bound);
        }
    }
    Err(Error::ScanBoundExceeded { k_star: SCAN_CAP + 1, cap: SCAN_CAP })
}

/// Symbol and kernel at one resonant frequency `k ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBlock {
    pub k: i64,
    pub symbol: DMatrix<Complex64>,
    pub sigma_min: f64,
    pub theta: Vec<CVector>,
}

impl KernelBlock {
    pub fn nu(&self) -> usize {
        self.theta.len()
    }

    /// Coordinates `Θ^H c` of a vector in this kernel basis.
    pub fn coords(&self, c: &CVector) -> Vec<Complex64> {
        self.theta.iter().map(|t| t.dotc(c)).collect()
    }

    pub fn project(&self, c: &CVector) -> CVector {
        let mut out = CVector::zeros(c.len());
        for t in &self.theta {
            out += t * t.dotc(c);
        }
        out
    }
}

/// Outcome of the linear hypotheses on the symbol and on `Ψ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearConditions {
    pub l1: bool,
    pub l2: bool,
    pub l3: bool,
    pub l4: bool,
    /// `min_{k∈𝒦} σ_min(ψ̂(k))`, absent when `𝒦` is empty.
    pub c_psi: Option<f64>,
    pub det_l0: f64,
    /// Largest principal-angle sine per resonant `k > 0`.
    pub l2_angles: BTreeMap<i64, f64>,
    pub l3_dets: BTreeMap<i64, f64>,
    /// Invariance residual `‖(I - ΘΘ^H) ψ̂(-k) Θ‖` per resonant `k > 0`.
    pub l4_residuals: BTreeMap<i64, f64>,
    /// Rayleigh quotients `Θ_{k,j}^H ψ̂(-k) Θ_{k,j}`, per `(k, j)`.
    #[serde(skip)]
    pub psi_eigen: BTreeMap<(i64, usize), Complex64>,
    /// Eigenvector residuals `‖ψ̂(-k)Θ - (Θ^Hψ̂(-k)Θ)Θ‖` per `(k, j)`.
    #[serde(skip)]
    pub l4_vector_residuals: BTreeMap<(i64, usize), f64>,
}

impl LinearConditions {
    pub fn all(&self) -> bool {
        self.l1 && self.l2 && self.l3 && self.l4
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    pub n: usize,
    /// Sorted, symmetric.
    pub resonant: Vec<i64>,
    pub bound: ScanBound,
    /// One block per resonant `k ≥ 0`, ascending.
    pub blocks: Vec<KernelBlock>,
    pub conditions: Option<LinearConditions>,
    pub notes: Vec<String>,
}

/// Scans `0 ≤ k ≤ k*` and builds kernel bases for every resonant frequency.
pub fn resonant_set(poly: &MatrixPolynomial, lambda: &MeasureMatrix, tol: f64) -> Result<ResonanceReport> {
    let bound = scan_bound(poly, lambda)?;
    let mut blocks = Vec::new();
    for k in 0..=bound.k_star as i64 {
        let l = symbol(poly, lambda, k);
        let sv = l.singular_values();
        let smin = sv.min();
        if smin < gate(sv.max(), tol) {
            let (nu, theta) = kernel_data(&l, tol);
            if nu == 0 {
                return Err(Error::KernelInconsistent { k });
            }
            blocks.push(KernelBlock {
                k,
                symbol: l,
                sigma_min: smin,
                theta,
            });
        }
    }
    let mut resonant: Vec<i64> = blocks.iter().flat_map(|b| [-b.k, b.k]).collect();
    resonant.sort_unstable();
    resonant.dedup();
    Ok(ResonanceReport {
        n: poly.n(),
        resonant,
        bound,
        blocks,
        conditions: None,
        notes: Vec::new(),
    })
}

fn principal_sines(a: &[CVector], b: &[CVector]) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    let mut worst: f64 = 0.0;
    for v in a {
        let mut r = v.clone();
        for w in b {
            r -= w * w.dotc(v);
        }
        worst = worst.max(r.norm());
    }
    worst
}

/// Checks the four linear hypotheses against a computed report.
pub fn check_linear_conditions(
    poly: &MatrixPolynomial,
    lambda: &MeasureMatrix,
    psi: &MeasureMatrix,
    report: &ResonanceReport,
    tol: f64,
) -> LinearConditions {
    let l0 = symbol(poly, lambda, 0);
    let det_l0 = l0.determinant().norm();
    let l1 = !report.resonant.contains(&0);
    let mut out = LinearConditions {
        l1,
        l2: true,
        l3: true,
        l4: true,
        c_psi: None,
        det_l0,
        l2_angles: BTreeMap::new(),
        l3_dets: BTreeMap::new(),
        l4_residuals: BTreeMap::new(),
        psi_eigen: BTreeMap::new(),
        l4_vector_residuals: BTreeMap::new(),
    };
    for b in &report.blocks {
        let (_, co) = kernel_data(&b.symbol.adjoint(), tol);
        let angle = principal_sines(&b.theta, &co);
        out.l2 &= angle < L2_TOL;
        out.l2_angles.insert(b.k, angle);

        let psi_k = psi.transform(b.k);
        let det = psi_k.determinant().norm();
        out.l3 &= det > L3_TOL;
        out.l3_dets.insert(b.k, det);
        let smin = sigma_min(&psi_k);
        out.c_psi = Some(out.c_psi.map_or(smin, |c: f64| c.min(smin)));

        let psi_m = psi.transform(-b.k);
        let mut inv: f64 = 0.0;
        for (j, t) in b.theta.iter().enumerate() {
            let image = &psi_m * t;
            let lambda_j = t.dotc(&image);
            out.psi_eigen.insert((b.k, j), lambda_j);
            out.l4_vector_residuals.insert((b.k, j), (&image - t * lambda_j).norm());
            inv = inv.max((&image - b.project(&image)).norm());
        }
        out.l4 &= inv < L4_TOL;
        out.l4_residuals.insert(b.k, inv);
    }
    out
}

/// Resonance analysis of a full problem, including the linear hypotheses.
pub fn analyze(prob: &ProblemSpec) -> Result<ResonanceReport> {
    let mut report = resonant_set(&prob.poly, &prob.lambda, RESONANCE_TOL)?;
    report.conditions = Some(check_linear_conditions(
        &prob.poly,
        &prob.lambda,
        &prob.psi,
        &report,
        RESONANCE_TOL,
    ));
    Ok(report)
}

impl ResonanceReport {
    /// Blocks with `k > 0`; these carry the kernel of `L` on real functions.
    pub fn positive_blocks(&self) -> impl Iterator<Item = &KernelBlock> {
        self.blocks.iter().filter(|b| b.k > 0)
    }

    pub fn block(&self, k: i64) -> Option<&KernelBlock> {
        self.blocks.iter().find(|b| b.k == k)
    }

    /// `ν = Σ_{k>0} ν_k`, so that `dim ker L = 2ν` when `0 ∉ 𝒦`.
    pub fn nu(&self) -> usize {
        self.positive_blocks().map(|b| b.nu()).sum()
    }

    /// Real dimension of the kernel of `L` on real functions.
    pub fn kernel_dim(&self) -> usize {
        2 * self.nu() + self.block(0).map_or(0, |b| b.nu())
    }

    /// `Θ_{k,j}` for any signed resonant `k`.
    pub fn theta(&self, k: i64, j: usize) -> Option<CVector> {
        let t = self.block(k.abs())?.theta.get(j)?;
        Some(if k >= 0 { t.clone() } else { t.map(|z| z.conj()) })
    }

    /// `(k, j)` index list for the positive blocks.
    pub fn coordinate_index(&self) -> Vec<(i64, usize)> {
        self.positive_blocks().flat_map(|b| (0..b.nu()).map(move |j| (b.k, j))).collect()
    }

    /// Orthogonal projection onto `ker L`.
    pub fn project(&self, u: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::zeros(u.n(), u.kmax());
        for b in &self.blocks {
            if b.k as usize <= u.kmax() {
                let c = b.project(&u.coeffs()[b.k as usize]);
                out.set_coeff(b.k as usize, c);
            }
        }
        out
    }

    /// `‖Θ_k^H φ̂(k)‖` per resonant `k ≥ 0`.
    pub fn image_defect(&self, phi: &TrigPoly) -> Vec<(i64, f64)> {
        self.blocks
            .iter()
            .map(|b| {
                let c = phi.coeff(b.k);
                let coords = b.coords(&c);
                (b.k, coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            })
            .collect()
    }

    /// Whether `φ` lies in the image of `L` up to `tol`.
    pub fn in_image(&self, phi: &TrigPoly, tol: f64) -> Result<()> {
        for (k, d) in self.image_defect(phi) {
            if d >= tol {
                return Err(Error::NotInImage { k, defect: d });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kernel: Vec<_> = self
            .blocks
            .iter()
            .map(|b| {
                serde_json::json!({
                    "k": b.k,
                    "nu_k": b.nu(),
                    "sigma_min": b.sigma_min,
                    "theta": b.theta.iter().map(|t| t.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let c = self.conditions.as_ref();
        let mut witnesses = serde_json::Map::new();
        witnesses.insert("scan_bound".into(), serde_json::to_value(&self.bound).unwrap());
        if let Some(c) = c {
            witnesses.insert("det_L0".into(), c.det_l0.into());
            let keyed = |m: &BTreeMap<i64, f64>| {
                serde_json::Value::Object(m.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect())
            };
            witnesses.insert("L2_principal_sines".into(), keyed(&c.l2_angles));
            witnesses.insert("L3_det_psi".into(), keyed(&c.l3_dets));
            witnesses.insert("L4_invariance_residual".into(), keyed(&c.l4_residuals));
        }
        serde_json::json!({
            "K": self.resonant,
            "k_star": self.bound.k_star,
            "nu": self.nu(),
            "kernel_dim": self.kernel_dim(),
            "kernel": kernel,
            "L1": c.map(|c| c.l1),
            "L2": c.map(|c| c.l2),
            "L3": c.map(|c| c.l3),
            "L4": c.map(|c| c.l4),
            "c_psi": c.and_then(|c| c.c_psi),
            "witnesses": witnesses,
            "notes": self.notes,
        })
    }
}

/// `u` with `û(k) = L_k^{-1} φ̂(k)` off `𝒦` and the minimal-norm solution on `𝒦`.
pub fn right_inverse(
    poly: &MatrixPolynomial,
    lambda: &MeasureMatrix,
    report: &ResonanceReport,
    phi: &TrigPoly,
    tol: f64,
) -> Result<TrigPoly> {
    report.in_image(phi, tol)?;
    let mut u = TrigPoly::zeros(phi.n(), phi.kmax());
    for k in 0..=phi.kmax() {
        let l = symbol(poly, lambda, k as i64);
        let c = &phi.coeffs()[k];
        let x = if report.block(k as i64).is_some() {
            pinv_solve(&l, c, RESONANCE_TOL)
        } else {
            l.lu().solve(c).ok_or(Error::KernelInconsistent { k: k as i64 })?
        };
        u.set_coeff(k, x);
    }
    Ok(u)
}

/// `κ = Σ_{|k|≤K} |k| ‖L_k^+‖`, so that `‖(Kφ)'‖_∞ ≤ κ ‖φ‖_∞` on the truncation.
pub fn right_inverse_bound(poly: &MatrixPolynomial, lambda: &MeasureMatrix, kmax: usize) -> f64 {
    (1..=kmax)
        .map(|k| 2.0 * k as f64 * pinv_norm(&symbol(poly, lambda, k as i64), RESONANCE_TOL))
        .sum()
}

/// Element of `ker L` in kernel coordinates `a_{k,j}`, `k > 0`:
/// `w(t) = Σ 2 Re(a_{k,j} e^{ikt} Θ_{k,j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub index: Vec<(i64, usize)>,
    pub amps: Vec<Complex64>,
}

impl KernelElement {
    pub fn zeros(report: &ResonanceReport) -> Self {
        let index = report.coordinate_index();
        let amps = vec![Complex64::new(0.0, 0.0); index.len()];
        Self { index, amps }
    }

    /// From real coordinates `(Re a, Im a)` per block.
    pub fn from_real(report: &ResonanceReport, x: &[f64]) -> Self {
        let index = report.coordinate_index();
        assert_eq!(x.len(), 2 * index.len(), "coordinate length");
        let amps = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Self { index, amps }
    }

    pub fn to_real(&self) -> DVector<f64> {
        DVector::from_iterator(2 * self.amps.len(), self.amps.iter().flat_map(|z| [z.re, z.im]))
    }

    /// Cosine/sine coordinates `(α, β)` with `w = Σ (α cos kt + β sin kt) Θ`
    /// for real `Θ`; unit elements sit on the sphere of radius `√2`.
    pub fn cos_sin_coords(&self) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.amps.len(),
            self.amps.iter().flat_map(|z| [2.0 * z.re, -2.0 * z.im]),
        )
    }

    pub fn from_trigpoly(report: &ResonanceReport, u: &TrigPoly) -> Self {
        let index = report.coordinate_index();
        let amps = index
            .iter()
            .map(|&(k, j)| {
                let t = &report.block(k).expect("indexed block").theta[j];
                t.dotc(&u.coeff(k))
            })
            .collect();
        Self { index, amps }
    }

    pub fn to_trigpoly(&self, report: &ResonanceReport, kmax: usize) -> TrigPoly {
        let mut u = TrigPoly::zeros(report.n, kmax);
        for (&(k, j), a) in self.index.iter().zip(&self.amps) {
            if k as usize > kmax {
                continue;
            }
            let t = &report.block(k).expect("indexed block").theta[j];
            let c = &u.coeffs()[k as usize] + t * *a;
            u.set_coeff(k as usize, c);
        }
        u
    }

    /// `sqrt(Σ|a|²) = ‖w‖_{L²} / √2`.
    pub fn amplitude_norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.amplitude_norm()
    }

    /// Real `L²` inner product `(w | v)`.
    pub fn l2_inner(&self, other: &Self) -> f64 {
        2.0 * self.amps.iter().zip(&other.amps).map(|(a, b)| (a.conj() * b).re).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            index: self.index.clone(),
            amps: self.amps.iter().map(|z| z * s).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.index
                .iter()
                .zip(&self.amps)
                .map(|(&(k, j), a)| serde_json::json!({"k": k, "j": j, "re": a.re, "im": a.im}))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{DensityProfile, ScalarMeasure};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn duffing_poly(m: f64) -> MatrixPolynomial {
        MatrixPolynomial::scalar(&[m * m, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn duffing_symbol_and_set() {
        let lam = MeasureMatrix::zero(1);
        assert_abs_diff_eq!(symbol(&duffing_poly(2.0), &lam, 2)[(0, 0)].norm(), 0.0);
        let r = resonant_set(&duffing_poly(3.0), &lam, RESONANCE_TOL).unwrap();
        assert_eq!(r.resonant, vec![-3, 3]);
        assert_eq!(r.nu(), 1);
        assert_eq!(r.blocks[0].theta[0][0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn beam_set() {
        let poly = MatrixPolynomial::scalar(&[4.0, 0.0, 5.0, 0.0, 1.0]).unwrap();
        let lam = MeasureMatrix::zero(1);
        assert_abs_diff_eq!(symbol(&poly, &lam, 3)[(0, 0)].re, 40.0, epsilon = 1e-12);
        let r = resonant_set(&poly, &lam, RESONANCE_TOL).unwrap();
        assert_eq!(r.resonant, vec![-2, -1, 1, 2]);
        assert_eq!(r.kernel_dim(), 4);
    }

    #[test]
    fn distributed_sine_is_resonant() {
        for m in [1.0f64, 2.0, 3.0] {
            let c = -2.0 * m * m / PI;
            let lam = MeasureMatrix::scalar(
                ScalarMeasure::density(-PI / m, 0.0, DensityProfile::Sin { c, omega: m, phase: 0.0 }).unwrap(),
            );
            let r = resonant_set(&MatrixPolynomial::scalar(&[0.0, 1.0]).unwrap(), &lam, RESONANCE_TOL).unwrap();
            assert_eq!(r.resonant, vec![-(m as i64), m as i64]);
        }
    }

    #[test]
    fn kernel_bases() {
        let z = Complex64::new(0.0, 0.0);
        let (nu, th) = kernel_data(&DMatrix::from_element(1, 1, z), RESONANCE_TOL);
        assert_eq!((nu, th[0][0]), (1, Complex64::new(1.0, 0.0)));
        let d = DMatrix::from_row_slice(2, 2, &[z, z, z, Complex64::new(0.0, 2.0)]);
        let (nu, th) = kernel_data(&d, RESONANCE_TOL);
        assert_eq!(nu, 1);
        assert_abs_diff_eq!((th[0].clone() - CVector::from_vec(vec![1.0.into(), z])).norm(), 0.0, epsilon = 1e-15);
        let (nu, th) = kernel_data(&DMatrix::zeros(2, 2), RESONANCE_TOL);
        assert_eq!(nu, 2);
        assert_eq!(th[1][1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn duffing_projection_and_inverse() {
        let poly = duffing_poly(1.0);
        let lam = MeasureMatrix::zero(1);
        let psi = MeasureMatrix::scalar(ScalarMeasure::dirac(0.0, 1.0));
        let mut r = resonant_set(&poly, &lam, RESONANCE_TOL).unwrap();
        let c = check_linear_conditions(&poly, &lam, &psi, &r, RESONANCE_TOL);
        assert!(c.all());
        assert_eq!(c.c_psi, Some(1.0));
        r.conditions = Some(c);
        let cos1 = TrigPoly::scalar_cos_sin(1, 1.0, 0.0);
        let cos2 = TrigPoly::scalar_cos_sin(2, 1.0, 0.0);
        assert_eq!(r.project(&cos1), cos1);
        assert!(r.project(&cos2).is_zero());
        assert_abs_diff_eq!(r.image_defect(&cos1)[0].1, 0.5, epsilon = 1e-15);
        let u = right_inverse(&poly, &lam, &r, &cos2, 1e-10).unwrap();
        assert_abs_diff_eq!(u.coeff(2)[0].re, -1.0 / 6.0, epsilon = 1e-15);
        assert!(matches!(right_inverse(&poly, &lam, &r, &cos1, 1e-10), Err(Error::NotInImage { k: 1, .. })));
    }

    #[test]
    fn kernel_element_parseval() {
        let poly = MatrixPolynomial::scalar(&[4.0, 0.0, 5.0, 0.0, 1.0]).unwrap();
        let r = resonant_set(&poly, &MeasureMatrix::zero(1), RESONANCE_TOL).unwrap();
        let w = KernelElement::from_real(&r, &[0.3, -0.2, 0.1, 0.5]);
        let u = w.to_trigpoly(&r, 4);
        assert_abs_diff_eq!(u.l2_norm(), w.l2_norm(), epsilon = 1e-14);
        assert_eq!(KernelElement::from_trigpoly(&r, &u), w);
    }

    #[test]
    fn scan_cap_reported() {
        let poly = MatrixPolynomial::scalar(&[0.0, 1e-9]).unwrap();
        let lam = MeasureMatrix::scalar(ScalarMeasure::dirac(0.0, 10.0));
        assert!(matches!(scan_bound(&poly, &lam), Err(Error::ScanBoundExceeded { .. })));
    }
}
