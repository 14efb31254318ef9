//! Truncated harmonic balance for `Lu = 𝒩u`: Levenberg-Marquardt on the real
//! coefficient vector, seeded from approximate zeros of the projected
//! bifurcation map `𝒫𝒩` on the kernel.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lazer_leach::problem_sphere_samples;
use crate::problem::ProblemSpec;
use crate::resonance::{right_inverse, symbol, KernelElement, ResonanceReport};
use crate::trigpoly::{CVector, TrigPoly};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianKind {
    #[default]
    Analytic,
    FiniteDifference,
}

/// Relative step of the finite-difference Jacobian.
pub const FD_STEP: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub kmax: usize,
    /// Collocation grid; `4 · kmax` when absent.
    pub grid: Option<usize>,
    pub tol_residual: f64,
    pub max_iter: usize,
    /// Initial damping relative to the largest diagonal entry of `JᵀJ`.
    pub lm_initial: f64,
    pub jacobian: JacobianKind,
    /// Sphere samples per radius when seeding.
    pub seed_samples: usize,
    /// Radii scanned when seeding.
    pub seed_radii: Vec<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            kmax: 64,
            grid: None,
            tol_residual: 1e-10,
            max_iter: 100,
            lm_initial: 1e-6,
            jacobian: JacobianKind::Analytic,
            seed_samples: 64,
            seed_radii: (0..12).map(|i| 0.125 * 2f64.powf(0.5 * i as f64)).collect(),
        }
    }
}

impl SolveConfig {
    pub fn with_kmax(kmax: usize) -> Self {
        Self { kmax, ..Self::default() }
    }

    pub fn grid(&self) -> usize {
        self.grid.unwrap_or(4 * self.kmax).max(2 * self.kmax + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kmax == 0 {
            return Err(Error::Semantic("kmax must be positive".into()));
        }
        let required = 2 * self.kmax + 1;
        if let Some(m) = self.grid {
            if m < required {
                return Err(Error::GridTooSmall { m, required });
            }
        }
        if self.tol_residual.is_nan() || self.tol_residual <= 0.0 {
            return Err(Error::Semantic("tol_residual must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub u: TrigPoly,
    /// `‖Lu - 𝒩u‖_{L²}` on the truncation.
    pub coeff_residual: f64,
    pub pointwise_residual: f64,
    pub iterations: usize,
    pub seed: KernelElement,
    pub converged: bool,
    /// Residual change when the collocation grid is doubled.
    pub aliasing_shift: f64,
    pub aliasing_alarm: bool,
    /// Argument of the dominant kernel amplitude, pinned for autonomous problems.
    pub phase_gauge: Option<f64>,
    pub trace: Vec<f64>,
}

impl SolveResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "converged": self.converged,
            "coeff_residual": self.coeff_residual,
            "pointwise_residual": self.pointwise_residual,
            "iterations": self.iterations,
            "seed": self.seed.to_json(),
            "aliasing_shift": self.aliasing_shift,
            "aliasing_alarm": self.aliasing_alarm,
            "phase_gauge": self.phase_gauge,
            "trace": self.trace,
            "u": serde_json::to_value(&self.u).expect("serializable"),
        })
    }
}

/// `R(u)` with `R̂(k) = L_k û(k) - 𝒩̂u(k)`, `0 ≤ k ≤ kmax`.
pub fn assemble_residual(prob: &ProblemSpec, u: &TrigPoly, m: usize) -> Result<TrigPoly> {
    let lu = prob.apply_linear(u)?;
    let nu = prob.nemytskii_eval(u, m)?;
    Ok(&lu - &nu)
}

fn real_basis(n: usize, kmax: usize, col: usize) -> TrigPoly {
    let mut x = DVector::zeros(n * (2 * kmax + 1));
    x[col] = 1.0;
    TrigPoly::from_real(n, kmax, &x)
}

/// Real matrix of `u ↦ Lu` in the packed coordinates.
fn linear_block(prob: &ProblemSpec, kmax: usize) -> DMatrix<f64> {
    let n = prob.n;
    let dim = n * (2 * kmax + 1);
    let mut a = DMatrix::zeros(dim, dim);
    let l0 = symbol(&prob.poly, &prob.lambda, 0);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = l0[(i, j)].re;
        }
    }
    for k in 1..=kmax {
        let l = symbol(&prob.poly, &prob.lambda, k as i64);
        let base = n * (2 * k - 1);
        for i in 0..n {
            for j in 0..n {
                let z = l[(i, j)];
                a[(base + i, base + j)] = z.re;
                a[(base + i, base + n + j)] = -z.im;
                a[(base + n + i, base + j)] = z.im;
                a[(base + n + i, base + n + j)] = z.re;
            }
        }
    }
    a
}

/// Analytic Jacobian of the packed residual: `L` minus the derivative of
/// the collocated Nemytskii operator.
pub fn jacobian_analytic(prob: &ProblemSpec, u: &TrigPoly, m: usize) -> Result<DMatrix<f64>> {
    let n = prob.n;
    let kmax = u.kmax();
    let dim = n * (2 * kmax + 1);
    let samples = prob.nonlinear_samples(u, m)?;
    let grads: Vec<DMatrix<f64>> = samples
        .psi_u
        .iter()
        .map(|v| {
            prob.g
                .jacobian(v)
                .ok_or_else(|| Error::Unsupported("solving needs a differentiable g; sign tables are excluded".into()))
        })
        .collect::<Result<_>>()?;
    let h_terms = prob.h.as_ref().map(|h| h.terms.as_slice()).unwrap_or(&[]);
    let h_weights: Vec<Vec<f64>> = h_terms
        .iter()
        .map(|term| {
            let shifted = u.shift(-term.delay).eval_grid(m)?;
            Ok(shifted
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let t = TAU * j as f64 / m as f64;
                    term.coeff * term.profile.derivative(s[term.input]) * term.time.eval(t)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut jac = linear_block(prob, kmax);
    for col in 0..dim {
        let b = real_basis(n, kmax, col);
        let db = prob.psi.apply_deviation(&b)?.eval_grid(m)?;
        let mut dn: Vec<DVector<f64>> = grads.iter().zip(&db).map(|(g, d)| g * d).collect();
        for (term, w) in h_terms.iter().zip(&h_weights) {
            let bs = b.shift(-term.delay).eval_grid(m)?;
            for (j, s) in bs.iter().enumerate() {
                dn[j][term.output] += w[j] * s[term.input];
            }
        }
        let dpoly = TrigPoly::analyze_grid(&dn, kmax)?.to_real();
        for r in 0..dim {
            jac[(r, col)] += dpoly[r];
        }
    }
    Ok(jac)
}

/// Central-difference Jacobian with relative step [`FD_STEP`].
pub fn jacobian_fd(prob: &ProblemSpec, u: &TrigPoly, m: usize) -> Result<DMatrix<f64>> {
    let n = prob.n;
    let kmax = u.kmax();
    let x = u.to_real();
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let h = FD_STEP * (1.0 + x[col].abs());
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[col] += h;
        xm[col] -= h;
        let rp = assemble_residual(prob, &TrigPoly::from_real(n, kmax, &xp), m)?.to_real();
        let rm = assemble_residual(prob, &TrigPoly::from_real(n, kmax, &xm), m)?.to_real();
        jac.set_column(col, &((rp - rm) / (2.0 * h)));
    }
    Ok(jac)
}

/// Local minimizers of `‖𝒫𝒩(ρw)‖` over radii and sphere samples, ascending.
pub fn seed_kernel(
    prob: &ProblemSpec,
    report: &ResonanceReport,
    n_samples: usize,
    radii: &[f64],
) -> Result<Vec<KernelElement>> {
    if report.nu() == 0 || radii.is_empty() {
        return Ok(Vec::new());
    }
    let order = report.positive_blocks().map(|b| b.k as usize).max().unwrap_or(0);
    let m = (8 * order).max(256);
    let sphere = problem_sphere_samples(prob, report, n_samples);
    let nr = radii.len();
    let ns = sphere.len();
    let mut f = vec![vec![0.0; ns]; nr];
    for (ri, &rho) in radii.iter().enumerate() {
        for (si, w) in sphere.iter().enumerate() {
            let u = w.scaled(rho).to_trigpoly(report, order);
            let pn = report.project(&prob.nemytskii_eval(&u, m)?);
            f[ri][si] = KernelElement::from_trigpoly(report, &pn).amplitude_norm();
        }
    }
    let neighbours: Vec<Vec<usize>> = if report.nu() == 1 {
        (0..ns).map(|s| vec![(s + ns - 1) % ns, (s + 1) % ns]).collect()
    } else {
        let x: Vec<DVector<f64>> = sphere.iter().map(|w| w.to_real()).collect();
        let nn = (2 * 2 * report.nu()).min(ns.saturating_sub(1));
        (0..ns)
            .map(|s| {
                let mut d: Vec<(f64, usize)> =
                    (0..ns).filter(|&o| o != s).map(|o| ((&x[s] - &x[o]).norm(), o)).collect();
                d.sort_by(|a, b| a.0.total_cmp(&b.0));
                d.into_iter().take(nn).map(|(_, o)| o).collect()
            })
            .collect()
    };
    let fmax = f.iter().flatten().copied().fold(0.0, f64::max);
    let threshold = 0.5 * fmax;
    let mut found: Vec<(f64, KernelElement)> = Vec::new();
    for ri in 1..nr {
        for si in 0..ns {
            let v = f[ri][si];
            if v >= threshold {
                continue;
            }
            let mut nbrs: Vec<f64> = neighbours[si].iter().map(|&o| f[ri][o]).collect();
            nbrs.push(f[ri - 1][si]);
            if ri + 1 < nr {
                nbrs.push(f[ri + 1][si]);
            }
            if nbrs.iter().all(|&x| v <= x) && nbrs.iter().any(|&x| v < x) {
                found.push((v, sphere[si].scaled(radii[ri])));
            }
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(found.into_iter().map(|(_, w)| w).collect())
}

/// Initial guess `w + K(I - 𝒫)𝒩(w)` from a kernel seed.
fn initial_guess(prob: &ProblemSpec, report: &ResonanceReport, seed: &KernelElement, kmax: usize, m: usize) -> Result<TrigPoly> {
    let w = seed.to_trigpoly(report, kmax);
    let nw = prob.nemytskii_eval(&w, m)?;
    let off = &nw - &report.project(&nw);
    let v = right_inverse(&prob.poly, &prob.lambda, report, &off, f64::INFINITY)?;
    Ok(&w + &v)
}

fn dominant_kernel_amp(report: &ResonanceReport, u: &TrigPoly) -> Option<Complex64> {
    let e = KernelElement::from_trigpoly(report, u);
    e.amps.into_iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).filter(|a| a.norm() > 1e-12)
}

struct Gauge {
    /// `(k, Θ)` of the pinned kernel coordinate.
    k: usize,
    theta: CVector,
    /// Unit reference phase.
    phase: Complex64,
}

impl Gauge {
    fn residual(&self, u: &TrigPoly) -> f64 {
        let a = self.theta.dotc(&u.coeffs()[self.k]);
        (self.phase.conj() * a).im
    }

    fn gradient(&self, n: usize, kmax: usize) -> DVector<f64> {
        let mut g = DVector::zeros(n * (2 * kmax + 1));
        let base = n * (2 * self.k - 1);
        let c = self.phase.conj();
        // Im(c · Σ conj(θ_i)(x_i + i y_i))
        for i in 0..n {
            let z = c * self.theta[i].conj();
            g[base + i] = z.im;
            g[base + n + i] = z.re;
        }
        g
    }
}

fn pick_gauge(prob: &ProblemSpec, report: &ResonanceReport, seed: &KernelElement, kmax: usize) -> Option<Gauge> {
    if !prob.is_autonomous() {
        return None;
    }
    let (idx, a) = seed
        .amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .filter(|(_, a)| a.norm() > 1e-12)?;
    let (k, j) = seed.index[idx];
    if k as usize > kmax {
        return None;
    }
    Some(Gauge {
        k: k as usize,
        theta: report.block(k)?.theta[j].clone(),
        phase: a / a.norm(),
    })
}

/// Damped Newton iteration on the packed coefficient vector from a kernel seed.
pub fn solve_periodic(
    prob: &ProblemSpec,
    report: &ResonanceReport,
    seed: &KernelElement,
    config: &SolveConfig,
) -> Result<SolveResult> {
    config.validate()?;
    if !prob.g.is_differentiable() {
        return Err(Error::Unsupported(
            "solving needs a differentiable g; sign tables are only supported for condition checks".into(),
        ));
    }
    let n = prob.n;
    let kmax = config.kmax;
    let m = config.grid();
    let gauge = pick_gauge(prob, report, seed, kmax);
    let mut u = initial_guess(prob, report, seed, kmax, m)?;

    let eval = |u: &TrigPoly| -> Result<(DVector<f64>, f64)> {
        let r = assemble_residual(prob, u, m)?;
        let norm = r.l2_norm();
        let mut v = r.to_real();
        if let Some(g) = &gauge {
            v = v.push(g.residual(u));
        }
        Ok((v, norm))
    };
    let jac = |u: &TrigPoly| -> Result<DMatrix<f64>> {
        let mut j = match config.jacobian {
            JacobianKind::Analytic => jacobian_analytic(prob, u, m)?,
            JacobianKind::FiniteDifference => jacobian_fd(prob, u, m)?,
        };
        if let Some(g) = &gauge {
            let row = g.gradient(n, kmax);
            let last = j.nrows();
            j = j.insert_row(last, 0.0);
            j.row_mut(last).copy_from(&row.transpose());
        }
        Ok(j)
    };

    let (mut r, mut rnorm) = eval(&u)?;
    let mut trace = vec![rnorm];
    let mut j = jac(&u)?;
    let mut a = j.transpose() * &j;
    let mut grad = j.transpose() * &r;
    let mut mu = config.lm_initial * a.diagonal().max().max(1e-300);
    let mut nu_f = 2.0;
    let mut iterations = 0;
    while iterations < config.max_iter && rnorm >= config.tol_residual {
        iterations += 1;
        let mut damped = a.clone();
        for i in 0..damped.nrows() {
            damped[(i, i)] += mu;
        }
        let Some(chol) = damped.cholesky() else {
            mu *= nu_f;
            nu_f *= 2.0;
            continue;
        };
        let step = chol.solve(&(-&grad));
        let x_new = u.to_real() + &step;
        let u_new = TrigPoly::from_real(n, kmax, &x_new);
        let (r_new, rnorm_new) = eval(&u_new)?;
        let predicted = step.dot(&(&step * mu - &grad));
        let actual = r.norm_squared() - r_new.norm_squared();
        let rho = if predicted > 0.0 { actual / predicted } else { -1.0 };
        if rho > 0.0 {
            u = u_new;
            r = r_new;
            rnorm = rnorm_new;
            trace.push(rnorm);
            if rnorm < config.tol_residual {
                break;
            }
            j = jac(&u)?;
            a = j.transpose() * &j;
            grad = j.transpose() * &r;
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
            nu_f = 2.0;
        } else {
            mu *= nu_f;
            nu_f *= 2.0;
            if step.norm() <= 1e-16 * (1.0 + u.to_real().norm()) {
                break;
            }
        }
    }
    let mut converged = rnorm < config.tol_residual;
    let doubled = assemble_residual(prob, &u, 2 * m)?.l2_norm();
    let aliasing_shift = (doubled - rnorm).abs();
    let aliasing_alarm = aliasing_shift > 10.0 * config.tol_residual;
    if aliasing_alarm {
        converged = false;
    }
    let pointwise_residual = verify_pointwise(prob, &u, 8 * kmax)?;
    let phase_gauge = if prob.is_autonomous() {
        dominant_kernel_amp(report, &u).map(|a| a.arg())
    } else {
        None
    };
    Ok(SolveResult {
        u,
        coeff_residual: rnorm,
        pointwise_residual,
        iterations,
        seed: seed.clone(),
        converged,
        aliasing_shift,
        aliasing_alarm,
        phase_gauge,
        trace,
    })
}

/// Seeds from [`seed_kernel`] followed by the zero seed; returns the first
/// converged run, or the best failed one.
pub fn solve(prob: &ProblemSpec, report: &ResonanceReport, config: &SolveConfig) -> Result<SolveResult> {
    let mut seeds = seed_kernel(prob, report, config.seed_samples, &config.seed_radii)?;
    seeds.push(KernelElement::zeros(report));
    let mut best: Option<SolveResult> = None;
    for seed in &seeds {
        let res = solve_periodic(prob, report, seed, config)?;
        if res.converged {
            return Ok(res);
        }
        if best.as_ref().is_none_or(|b| res.coeff_residual < b.coeff_residual) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least the zero seed"))
}

/// Every converged run over the same seeds, dropping solutions closer than
/// `1e-6` in `L²` to one already found. No ranking is implied by the order.
pub fn solve_all(prob: &ProblemSpec, report: &ResonanceReport, config: &SolveConfig) -> Result<Vec<SolveResult>> {
    let mut seeds = seed_kernel(prob, report, config.seed_samples, &config.seed_radii)?;
    seeds.push(KernelElement::zeros(report));
    let mut found: Vec<SolveResult> = Vec::new();
    for seed in &seeds {
        let res = solve_periodic(prob, report, seed, config)?;
        if res.converged && found.iter().all(|f| (&f.u - &res.u).l2_norm() > 1e-6) {
            found.push(res);
        }
    }
    Ok(found)
}

/// `sup_t |P(∂)u + Λ̃u + g(Ψ̃u) + h - p|` on `m_fine` points, with measures
/// applied directly rather than through the collocation grid.
pub fn verify_pointwise(prob: &ProblemSpec, u: &TrigPoly, m_fine: usize) -> Result<f64> {
    let required = 8 * u.kmax();
    if m_fine < required {
        return Err(Error::GridTooSmall { m: m_fine, required });
    }
    let pu = prob.poly.apply(u);
    let mut worst: f64 = 0.0;
    for j in 0..m_fine {
        let t = TAU * j as f64 / m_fine as f64;
        let r = pu.eval(t) + prob.lambda.apply_at(u, t) + prob.nonlinear_at(u, t) - prob.p.eval(t);
        worst = worst.max(r.norm());
    }
    Ok(worst)
}
