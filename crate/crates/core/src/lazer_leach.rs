//! Limit fields `g_w`, the projected maps `Γ̃` and `γ` on the kernel sphere,
//! sampled certificates for the nonvanishing and averaging conditions, and
//! Brouwer degree by winding numbers.
//!
//! Certificates are sampling-based: a positive verdict is evidence over the
//! sampled sphere points, not a proof. Margins are reported in amplitude
//! units, `sqrt(Σ|a_{k,j}|²) = ‖·‖_{L²} / √2`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlinear::{Direction, GSpec};
use crate::problem::ProblemSpec;
use crate::resonance::{KernelElement, ResonanceReport};
use crate::trigpoly::TrigPoly;

/// Grid used for limit fields unless stated otherwise.
pub const DEFAULT_GRID: usize = 4096;
/// Grid samples with `|v| ≤ ZERO_REL · max|v|` count as zeros of `Ψ̃w`.
pub const ZERO_REL: f64 = 1e-13;
/// Strictness threshold for margins.
pub const MARGIN_TOL: f64 = 1e-9;
/// `Γ̃` below this amplitude counts as vanishing.
pub const VANISH_TOL: f64 = 1e-12;
/// Off-block difference above which kernel blocks count as coupled.
pub const COUPLING_TOL: f64 = 1e-9;
/// Grid for `small_set_measure`.
pub const SMALL_SET_GRID: usize = 1 << 16;
/// Grid for `gamma_convergence`.
pub const CONVERGENCE_GRID: usize = 1 << 20;

const MAX_REFINE: u32 = 40;

/// Unit elements of `ker L`, `‖w‖_{L²} = 1`.
pub type SphereSample = KernelElement;

pub fn radial_limit(g: &GSpec, dir: &Direction) -> Result<DVector<f64>> {
    g.radial_limit(dir)
}

fn kernel_order(report: &ResonanceReport) -> usize {
    report.positive_blocks().map(|b| b.k as usize).max().unwrap_or(0)
}

/// Samples of `Ψ̃w` on `m` points.
fn psi_w_samples(prob: &ProblemSpec, report: &ResonanceReport, w: &KernelElement, m: usize) -> Result<Vec<DVector<f64>>> {
    let wt = w.to_trigpoly(report, kernel_order(report));
    prob.psi.apply_deviation(&wt)?.eval_grid(m)
}

/// `g_w(t_j)`: the radial limit along `(Ψ̃w)(t_j)`, or `g(0)` where it vanishes.
pub fn g_w_samples(prob: &ProblemSpec, report: &ResonanceReport, w: &KernelElement, m: usize) -> Result<Vec<DVector<f64>>> {
    let v = psi_w_samples(prob, report, w, m)?;
    let vmax = v.iter().flat_map(|x| x.iter()).fold(0.0f64, |a, b| a.max(b.abs()));
    let zero_tol = ZERO_REL * vmax;
    Ok(v.iter().map(|x| prob.g.limit_field(x, zero_tol)).collect())
}

fn limit_poly(prob: &ProblemSpec, report: &ResonanceReport, w: &KernelElement, m: usize) -> Result<TrigPoly> {
    TrigPoly::analyze_grid(&g_w_samples(prob, report, w, m)?, kernel_order(report))
}

/// `Γ̃(w) = 𝒫(g_w - p)` in kernel coordinates. `𝒫p` is taken from the exact
/// coefficients of `p`.
pub fn gamma_tilde(prob: &ProblemSpec, report: &ResonanceReport, w: &KernelElement, m: usize) -> Result<KernelElement> {
    let gw = limit_poly(prob, report, w, m)?;
    let p = prob.p.with_kmax(gw.kmax());
    Ok(KernelElement::from_trigpoly(report, &(&gw - &p)))
}

/// `γ(w) = Γ̃(w) / ‖Γ̃(w)‖_{L²}`.
pub fn gamma_unit(prob: &ProblemSpec, report: &ResonanceReport, w: &KernelElement, m: usize) -> Result<KernelElement> {
    let gt = gamma_tilde(prob, report, w, m)?;
    let a = gt.amplitude_norm();
    if a < VANISH_TOL {
        return Err(Error::ProjectedMapVanishes {
            witness: w.to_real().iter().copied().collect(),
        });
    }
    Ok(gt.scaled(1.0 / gt.l2_norm()))
}

/// `w = √2 cos(kt - φ) Θ` for a single-block kernel, `a = e^{-iφ}/√2`.
pub fn phase_element(report: &ResonanceReport, phi: f64) -> Result<KernelElement> {
    if report.nu() != 1 {
        return Err(Error::Unsupported(format!(
            "phase parametrization needs a two-dimensional kernel, found 2ν = {}",
            2 * report.nu()
        )));
    }
    let a = Complex64::from_polar(1.0 / SQRT_2, -phi);
    Ok(KernelElement::from_real(report, &[a.re, a.im]))
}

fn hash_offset(prob: &ProblemSpec) -> f64 {
    let h = prob.linear_hash();
    let x = u64::from_le_bytes(h[..8].try_into().expect("8 bytes"));
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// Largest root of `x^{d+1} = x + 1`.
fn harmonious(d: usize) -> f64 {
    let mut x = 2.0f64;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (d as f64 + 1.0));
    }
    x
}

/// Deterministic unit samples of `ker L`.
///
/// A two-dimensional kernel gets equally spaced phases; higher dimensions
/// get an additive recurrence sequence pushed through Box-Muller. The
/// offset is a free parameter in `[0, 1)`.
pub fn sphere_samples(report: &ResonanceReport, n_samples: usize, offset: f64) -> Vec<SphereSample> {
    let d = 2 * report.nu();
    if d == 0 {
        return Vec::new();
    }
    if d == 2 {
        return (0..n_samples)
            .map(|i| phase_element(report, TAU * (i as f64 + offset) / n_samples as f64).expect("ν = 1"))
            .collect();
    }
    let g = harmonious(d);
    let alpha: Vec<f64> = (1..=d).map(|i| g.powi(-(i as i32)).fract()).collect();
    (0..n_samples)
        .map(|i| {
            let u: Vec<f64> = alpha.iter().map(|a| (offset + (i as f64 + 1.0) * a).fract()).collect();
            let mut x: Vec<f64> = u
                .chunks(2)
                .flat_map(|c| {
                    let r = (-2.0 * (1.0 - c[0]).ln()).sqrt();
                    [r * (TAU * c[1]).cos(), r * (TAU * c[1]).sin()]
                })
                .collect();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            x.iter_mut().for_each(|v| *v /= norm * SQRT_2);
            KernelElement::from_real(report, &x)
        })
        .collect()
}

/// Sphere samples offset by the hash of `P`, `Λ` and `Ψ`, so problems that
/// share the linear part share the points.
pub fn problem_sphere_samples(prob: &ProblemSpec, report: &ResonanceReport, n_samples: usize) -> Vec<SphereSample> {
    sphere_samples(report, n_samples, hash_offset(prob))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    R2,
    N2,
    R3,
    #[serde(rename = "LL")]
    LazerLeach,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub margin: Option<f64>,
    pub degree: Option<i64>,
    pub samples: usize,
    pub witness: Option<serde_json::Value>,
    pub pass: bool,
    pub note: String,
}

/// One sphere point with its projected limit map.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSample {
    pub w: SphereSample,
    pub gamma_tilde: KernelElement,
    /// `‖Γ̃(w)‖` in amplitude units.
    pub r2: f64,
    /// Best averaging gap over the test directions.
    pub n2: f64,
    pub n2_direction: KernelElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereScan {
    pub samples: Vec<ScanSample>,
    pub r2: Certificate,
    pub n2: Certificate,
}

fn test_directions(gt: &KernelElement) -> Vec<KernelElement> {
    let mut dirs = Vec::new();
    let norm = gt.l2_norm();
    if norm > VANISH_TOL {
        let g = gt.scaled(1.0 / norm);
        dirs.push(g.scaled(-1.0));
        dirs.push(g);
    }
    let c = 1.0 / SQRT_2;
    for b in 0..gt.amps.len() {
        for z in [Complex64::new(c, 0.0), Complex64::new(-c, 0.0), Complex64::new(0.0, c), Complex64::new(0.0, -c)] {
            let mut e = KernelElement {
                index: gt.index.clone(),
                amps: vec![Complex64::new(0.0, 0.0); gt.amps.len()],
            };
            e.amps[b] = z;
            dirs.push(e);
        }
    }
    dirs
}

/// Components on which some kernel basis vector is nonzero.
pub fn kernel_support(report: &ResonanceReport) -> Vec<usize> {
    (0..report.n)
        .filter(|&i| {
            report
                .positive_blocks()
                .any(|b| b.theta.iter().any(|th| th[i].norm() > ZERO_REL))
        })
        .collect()
}

/// Sup bound of `h` on the kernel support; `(h | w_j)` sees nothing else.
pub fn kernel_h_sup(prob: &ProblemSpec, report: &ResonanceReport) -> f64 {
    prob.h
        .as_ref()
        .map_or(0.0, |h| h.sup_bound_on(prob.n, &kernel_support(report)))
}

/// Evaluates `Γ̃` on sphere samples and certifies nonvanishing and the
/// averaging inequality `ḡ_{w,j} + |h|_∞ < (p | w_j)`.
pub fn sphere_scan(prob: &ProblemSpec, report: &ResonanceReport, n_samples: usize, m: usize) -> Result<SphereScan> {
    let h_sup = kernel_h_sup(prob, report);
    let mut samples = Vec::with_capacity(n_samples);
    for w in problem_sphere_samples(prob, report, n_samples) {
        let gt = gamma_tilde(prob, report, &w, m)?;
        let mut best = f64::NEG_INFINITY;
        let mut best_dir = None;
        for d in test_directions(&gt) {
            let gap = (-gt.l2_inner(&d) - h_sup) / SQRT_2;
            if gap > best {
                best = gap;
                best_dir = Some(d);
            }
        }
        samples.push(ScanSample {
            r2: gt.amplitude_norm(),
            n2: best,
            n2_direction: best_dir.expect("at least one direction"),
            w,
            gamma_tilde: gt,
        });
    }
    let count = samples.len();
    let worst_r2 = samples.iter().min_by(|a, b| a.r2.total_cmp(&b.r2));
    let worst_n2 = samples.iter().min_by(|a, b| a.n2.total_cmp(&b.n2));
    let note = "sampling-based: evidence over the sampled sphere points, not a proof";
    let r2 = Certificate {
        kind: CertificateKind::R2,
        margin: worst_r2.map(|s| s.r2),
        degree: None,
        samples: count,
        witness: worst_r2.map(|s| serde_json::json!({"w": s.w.to_json(), "gamma_tilde": s.gamma_tilde.to_json()})),
        pass: worst_r2.is_none_or(|s| s.r2 > MARGIN_TOL),
        note: note.into(),
    };
    let n2 = Certificate {
        kind: CertificateKind::N2,
        margin: worst_n2.map(|s| s.n2),
        degree: None,
        samples: count,
        witness: worst_n2.map(|s| serde_json::json!({"w": s.w.to_json(), "w_j": s.n2_direction.to_json(), "h_sup": h_sup})),
        pass: worst_n2.is_none_or(|s| s.n2 > MARGIN_TOL),
        note: note.into(),
    };
    Ok(SphereScan { samples, r2, n2 })
}

fn refine<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    (a, za): (f64, Complex64),
    (b, zb): (f64, Complex64),
    depth: u32,
) -> Result<f64> {
    let d = (zb / za).arg();
    if d.abs() < FRAC_PI_2 {
        return Ok(d);
    }
    let mid = 0.5 * (a + b);
    if depth >= MAX_REFINE {
        return Err(Error::RefinementExhausted { at: mid });
    }
    let zm = f(mid)?;
    Ok(refine(f, (a, za), (mid, zm), depth + 1)? + refine(f, (mid, zm), (b, zb), depth + 1)?)
}

/// Winding number of a closed curve `φ ↦ f(φ)`, `φ ∈ [0, 2π]`, around the
/// origin, counterclockwise positive. Steps of `π/2` or more are bisected.
pub fn winding_number<F: FnMut(f64) -> Result<Complex64>>(mut f: F, n_grid: usize) -> Result<i64> {
    let n = n_grid.max(3);
    let z0 = f(0.0)?;
    let mut prev = (0.0, z0);
    let mut total = 0.0;
    for i in 1..=n {
        let phi = TAU * i as f64 / n as f64;
        let z = if i == n { z0 } else { f(phi)? };
        total += refine(&mut f, prev, (phi, z), 0)?;
        prev = (phi, z);
    }
    Ok((total / TAU).round() as i64)
}

/// Degree of `γ` for a two-dimensional kernel: the winding of
/// `φ ↦ γ(√2 cos(kt - φ) Θ)` in the `(Re a, Im a)` plane.
pub fn degree_winding(prob: &ProblemSpec, report: &ResonanceReport, n_grid: usize, m: usize) -> Result<i64> {
    if report.nu() != 1 {
        return Err(Error::Unsupported(format!(
            "degree by winding needs 2ν = 2, found 2ν = {}; provide block structure",
            2 * report.nu()
        )));
    }
    winding_number(
        |phi| {
            let w = phase_element(report, phi)?;
            Ok(gamma_unit(prob, report, &w, m)?.amps[0])
        },
        n_grid,
    )
}

/// Component index `i` with `Θ = e_i`, if the basis vector is a coordinate vector.
fn coordinate_component(theta: &DVector<Complex64>) -> Option<usize> {
    let mut idx = None;
    for (i, z) in theta.iter().enumerate() {
        if (z - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            if idx.is_some() {
                return None;
            }
            idx = Some(i);
        } else if z.norm() > 1e-12 {
            return None;
        }
    }
    idx
}

/// Per-block data for componentwise problems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockInfo {
    pub k: i64,
    pub j: usize,
    pub component: usize,
    /// `g_i(+∞) - g_i(-∞)`
    pub jump: f64,
    /// `p̂_i(k)`
    pub forcing: (f64, f64),
    /// `(1/π)|jump| - |p̂_i(k)|`
    pub margin: f64,
    /// `-arg` of the eigenvalue of `ψ̂(-k)` on `Θ`.
    pub theta_psi: f64,
}

/// Blocks of a componentwise problem whose kernel basis vectors are
/// coordinate vectors.
pub fn componentwise_blocks(prob: &ProblemSpec, report: &ResonanceReport) -> Result<Vec<BlockInfo>> {
    let jumps = prob.g.component_jumps()?;
    let mut out = Vec::new();
    for b in report.positive_blocks() {
        let psi_m = prob.psi.transform(-b.k);
        let pk = prob.p.coeff(b.k);
        for (j, t) in b.theta.iter().enumerate() {
            let i = coordinate_component(t).ok_or_else(|| {
                Error::NonComponentwise(format!("kernel vector Θ_({},{}) is not a coordinate vector", b.k, j))
            })?;
            let mu = (&psi_m * t)[i];
            let p = pk[i];
            out.push(BlockInfo {
                k: b.k,
                j,
                component: i,
                jump: jumps[i],
                forcing: (p.re, p.im),
                margin: jumps[i].abs() / PI - p.norm(),
                theta_psi: -mu.arg(),
            });
        }
    }
    Ok(out)
}

/// `min_blocks (1/π)|g_i(+∞) - g_i(-∞)| - |p̂_i(k)|`.
pub fn ll_margin(prob: &ProblemSpec, report: &ResonanceReport) -> Result<f64> {
    let blocks = componentwise_blocks(prob, report)?;
    if blocks.is_empty() {
        return Err(Error::Unsupported("no resonant modes".into()));
    }
    Ok(blocks.iter().map(|b| b.margin).fold(f64::INFINITY, f64::min))
}

fn check_decoupled(prob: &ProblemSpec, report: &ResonanceReport, m: usize) -> Result<()> {
    let nb = report.coordinate_index().len();
    if nb < 2 {
        return Ok(());
    }
    let mut energy: f64 = 0.0;
    for s in 0..4 {
        let phases: Vec<f64> = (0..nb).map(|b| 0.37 + 1.91 * (s * nb + b) as f64).collect();
        let mixed_x: Vec<f64> = phases
            .iter()
            .flat_map(|p| {
                let a = Complex64::from_polar(1.0 / (2.0 * nb as f64).sqrt(), -p);
                [a.re, a.im]
            })
            .collect();
        let mixed = gamma_tilde(prob, report, &KernelElement::from_real(report, &mixed_x), m)?;
        for b in 0..nb {
            let mut single_x = vec![0.0; 2 * nb];
            single_x[2 * b] = mixed_x[2 * b];
            single_x[2 * b + 1] = mixed_x[2 * b + 1];
            let single = gamma_tilde(prob, report, &KernelElement::from_real(report, &single_x), m)?;
            energy = energy.max((mixed.amps[b] - single.amps[b]).norm());
        }
    }
    if energy > COUPLING_TOL {
        return Err(Error::Coupled { energy });
    }
    Ok(())
}

/// Degree for decoupled componentwise kernels: the product of the winding
/// numbers of the block models `T_b(φ) = (Δg_i/π) e^{-i(φ+θ_b)} - p̂_i(k)`.
pub fn degree_product(prob: &ProblemSpec, report: &ResonanceReport, m: usize) -> Result<i64> {
    let blocks = componentwise_blocks(prob, report)?;
    if blocks.is_empty() {
        return Err(Error::Unsupported("no resonant modes".into()));
    }
    for (i, b) in blocks.iter().enumerate() {
        if b.margin <= MARGIN_TOL {
            return Err(Error::BlockMargin { block: i, margin: b.margin });
        }
    }
    check_decoupled(prob, report, m)?;
    let mut degree = 1;
    for b in &blocks {
        let p = Complex64::new(b.forcing.0, b.forcing.1);
        degree *= winding_number(
            |phi| Ok(Complex64::from_polar(b.jump / PI, -(phi + b.theta_psi)) - p),
            64,
        )?;
    }
    Ok(degree)
}

/// `μ{t : |w(t)| < ε}` under the normalized Haar measure.
pub fn small_set_measure(w: &TrigPoly, eps: f64) -> Result<f64> {
    let samples = w.eval_grid(SMALL_SET_GRID)?;
    let hits = samples.iter().filter(|x| x.norm() < eps).count();
    Ok(hits as f64 / SMALL_SET_GRID as f64)
}

/// Smallest `C` with `small_set_measure(w, ε) ≤ C ε^{exponent}` over `eps`.
pub fn fit_power_bound(w: &TrigPoly, eps: &[f64], exponent: f64) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &e in eps {
        c = c.max(small_set_measure(w, e)? / e.powf(exponent));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub s: f64,
    /// `‖g(sΨ̃w) - g_w‖_{L²}`
    pub field_gap: f64,
    /// `‖𝒫(g_w - g(sΨ̃w))‖_{L²}`, that is `‖Γ̃(w) + Γ(sw)‖` with `h = 0`.
    pub projected_gap: f64,
}

/// Distance between the limit map and its finite-radius counterpart along `s w`.
pub fn gamma_convergence(
    prob: &ProblemSpec,
    report: &ResonanceReport,
    w: &KernelElement,
    s_list: &[f64],
) -> Result<Vec<ConvergencePoint>> {
    let m = CONVERGENCE_GRID;
    let v = psi_w_samples(prob, report, w, m)?;
    let vmax = v.iter().flat_map(|x| x.iter()).fold(0.0f64, |a, b| a.max(b.abs()));
    let gw: Vec<DVector<f64>> = v.iter().map(|x| prob.g.limit_field(x, ZERO_REL * vmax)).collect();
    let kmax = kernel_order(report);
    let mut out = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let diff: Vec<DVector<f64>> = v.iter().zip(&gw).map(|(x, l)| l - prob.g.eval(&(x * s))).collect();
        let field_gap = (diff.iter().map(|d| d.norm_squared()).sum::<f64>() / m as f64).sqrt();
        let proj = report.project(&TrigPoly::analyze_grid(&diff, kmax)?);
        out.push(ConvergencePoint {
            s,
            field_gap,
            projected_gap: proj.l2_norm(),
        });
    }
    Ok(out)
}

/// Full condition check for `check-ll`.
#[derive(Clone, Debug, PartialEq)]
pub struct LlReport {
    pub r2: Certificate,
    pub n2: Certificate,
    pub r3: Certificate,
    pub ll: Option<Certificate>,
    pub blocks: Vec<BlockInfo>,
    pub notes: Vec<String>,
}

impl LlReport {
    pub fn pass(&self) -> bool {
        self.r2.pass && self.n2.pass && self.r3.pass && self.ll.as_ref().is_none_or(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.pass(),
            "certificates": [&self.r2, &self.n2, &self.r3, &self.ll],
            "ll_margin": self.ll.as_ref().and_then(|c| c.margin),
            "degree": self.r3.degree,
            "blocks": self.blocks,
            "notes": self.notes,
        })
    }
}

/// Runs the sphere scan, the degree computation and the classical margin.
pub fn certify(prob: &ProblemSpec, report: &ResonanceReport, n_samples: usize, m: usize) -> Result<LlReport> {
    let mut notes = Vec::new();
    if let Some(c) = &report.conditions {
        if !c.all() {
            notes.push(format!(
                "linear hypotheses not all satisfied (L1 {}, L2 {}, L3 {}, L4 {})",
                c.l1, c.l2, c.l3, c.l4
            ));
        }
    }
    if report.nu() == 0 {
        notes.push("kernel is trivial; the limit-map conditions are vacuous".into());
    }
    let scan = sphere_scan(prob, report, n_samples, m)?;
    let (degree, r3_note) = if report.nu() == 0 {
        (None, "no kernel".to_string())
    } else if report.nu() == 1 {
        match degree_winding(prob, report, 64, m) {
            Ok(d) => (Some(d), "winding number of γ".to_string()),
            Err(e) => (None, e.to_string()),
        }
    } else {
        match degree_product(prob, report, m) {
            Ok(d) => (Some(d), "product of block winding numbers".to_string()),
            Err(e) => (None, e.to_string()),
        }
    };
    let r3 = Certificate {
        kind: CertificateKind::R3,
        margin: None,
        degree,
        samples: 0,
        witness: None,
        pass: report.nu() == 0 || degree.is_some_and(|d| d != 0),
        note: r3_note,
    };
    let (ll, blocks) = match componentwise_blocks(prob, report) {
        Ok(blocks) if !blocks.is_empty() => {
            let worst = blocks
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
                .expect("non-empty");
            let margin = worst.1.margin;
            (
                Some(Certificate {
                    kind: CertificateKind::LazerLeach,
                    margin: Some(margin),
                    degree: None,
                    samples: blocks.len(),
                    witness: Some(serde_json::json!({"block": worst.0})),
                    pass: margin > MARGIN_TOL,
                    note: "classical componentwise inequality".into(),
                }),
                blocks,
            )
        }
        Ok(_) => (None, Vec::new()),
        Err(e) => {
            notes.push(format!("classical margin not available: {e}"));
            (None, Vec::new())
        }
    };
    Ok(LlReport {
        r2: scan.r2,
        n2: scan.n2,
        r3,
        ll,
        blocks,
        notes,
    })
}
