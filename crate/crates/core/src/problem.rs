//! Problem statement `P(∂)u + Λ̃u + g(Ψ̃u) + h(t, u_t) = p(t)` and its JSON form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measures::MeasureMatrix;
use crate::nonlinear::{GSpec, HSpec};
use crate::solver::SolveConfig;
use crate::trigpoly::TrigPoly;

/// Threshold on `|det A_m| / ‖A_m‖^N` below which the leading coefficient
/// counts as singular.
const LEADING_DET_TOL: f64 = 1e-12;

/// `P(x) = Σ_j A_j x^j` with real square coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<DMatrix<f64>>,
}

impl MatrixPolynomial {
    /// Coefficients in ascending order `A_0, ..., A_m`.
    pub fn new(coeffs: Vec<DMatrix<f64>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Semantic("P must have degree at least 1".into()));
        }
        let n = coeffs[0].nrows();
        for a in &coeffs {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch {
                    what: "polynomial coefficient",
                    expected: n,
                    found: if a.nrows() != n { a.nrows() } else { a.ncols() },
                });
            }
        }
        let lead = coeffs.last().expect("non-empty");
        let norm = lead.norm();
        let det = if norm == 0.0 {
            0.0
        } else {
            (lead / norm).determinant().abs()
        };
        if det <= LEADING_DET_TOL {
            return Err(Error::SingularLeading { det });
        }
        Ok(Self { coeffs })
    }

    /// Scalar polynomial from ascending real coefficients.
    pub fn scalar(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| DMatrix::from_element(1, 1, c)).collect())
    }

    /// `q(x) I_N` for a scalar polynomial `q`.
    pub fn scalar_identity(n: usize, coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| DMatrix::identity(n, n) * c).collect())
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    pub fn leading(&self) -> &DMatrix<f64> {
        self.coeffs.last().expect("non-empty")
    }

    /// `P(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        let n = self.n();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a.map(Complex64::from);
        }
        acc
    }

    /// `P(∂)u`.
    pub fn apply(&self, u: &TrigPoly) -> TrigPoly {
        u.map_modes(|k, c| self.eval(Complex64::new(0.0, k as f64)) * c)
    }
}

/// Full problem data.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub n: usize,
    pub poly: MatrixPolynomial,
    pub lambda: MeasureMatrix,
    pub psi: MeasureMatrix,
    pub g: GSpec,
    pub h: Option<HSpec>,
    pub p: TrigPoly,
    pub solve: Option<SolveConfig>,
}

/// Grid samples of the pieces of `𝒩u`.
pub struct NonlinearSamples {
    /// `(Ψ̃u)(t_j)`
    pub psi_u: Vec<DVector<f64>>,
    /// `g((Ψ̃u)(t_j)) + h(t_j, u_{t_j})`
    pub gh: Vec<DVector<f64>>,
}

impl ProblemSpec {
    pub fn new(
        poly: MatrixPolynomial,
        lambda: MeasureMatrix,
        psi: MeasureMatrix,
        g: GSpec,
        h: Option<HSpec>,
        p: TrigPoly,
    ) -> Result<Self> {
        let spec = Self {
            n: poly.n(),
            poly,
            lambda,
            psi,
            g,
            h,
            p,
            solve: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let check = |what: &'static str, found: usize| {
            if found == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { what, expected: n, found })
            }
        };
        check("polynomial P", self.poly.n())?;
        check("measure matrix Lambda", self.lambda.n())?;
        check("measure matrix Psi", self.psi.n())?;
        check("forcing p", self.p.n())?;
        self.g.validate(n)?;
        if let Some(h) = &self.h {
            h.validate(n)?;
        }
        Ok(())
    }

    pub fn h_sup(&self) -> f64 {
        self.h.as_ref().map_or(0.0, |h| h.sup_bound(self.n))
    }

    /// True when neither `p` nor `h` depends on time.
    pub fn is_autonomous(&self) -> bool {
        self.p.coeffs().iter().skip(1).all(|c| c.iter().all(|z| z.norm() == 0.0))
            && !self.h.as_ref().is_some_and(|h| h.has_time_dependence())
    }

    /// `P(∂)u + Λ̃u`.
    pub fn apply_linear(&self, u: &TrigPoly) -> Result<TrigPoly> {
        Ok(&self.poly.apply(u) + &self.lambda.apply_deviation(u)?)
    }

    /// Samples `Ψ̃u` and `g(Ψ̃u) + h` on `m` grid points.
    pub fn nonlinear_samples(&self, u: &TrigPoly, m: usize) -> Result<NonlinearSamples> {
        let psi_u = self.psi.apply_deviation(u)?.eval_grid(m)?;
        let mut gh: Vec<DVector<f64>> = psi_u.iter().map(|v| self.g.eval(v)).collect();
        if let Some(h) = &self.h {
            for term in &h.terms {
                let shifted = u.shift(-term.delay).eval_grid(m)?;
                for (j, s) in shifted.iter().enumerate() {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    gh[j][term.output] += term.coeff * term.profile.eval(s[term.input]) * term.time.eval(t);
                }
            }
        }
        Ok(NonlinearSamples { psi_u, gh })
    }

    /// `𝒩u = p - g(Ψ̃u) - h(t, u_t)` truncated at the order of `u`.
    ///
    /// The grid part `g + h` is resampled with `m` points; the forcing is
    /// added from its exact coefficients.
    pub fn nemytskii_eval(&self, u: &TrigPoly, m: usize) -> Result<TrigPoly> {
        let kmax = u.kmax();
        let s = self.nonlinear_samples(u, m)?;
        let gh = TrigPoly::analyze_grid(&s.gh, kmax)?;
        Ok(&self.p.with_kmax(kmax) - &gh)
    }

    /// Pointwise `g(Ψ̃u) + h` at an arbitrary time, using direct measure
    /// application.
    pub fn nonlinear_at(&self, u: &TrigPoly, t: f64) -> DVector<f64> {
        let mut out = self.g.eval(&self.psi.apply_at(u, t));
        if let Some(h) = &self.h {
            for term in &h.terms {
                let s = u.eval(t - term.delay);
                out[term.output] += term.coeff * term.profile.eval(s[term.input]) * term.time.eval(t);
            }
        }
        out
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> [u8; 32] {
        let text = serde_json::to_string(&ProblemFile::from(self)).expect("serializable problem");
        Sha256::digest(text.as_bytes()).into()
    }

    /// SHA-256 of the canonical JSON of `n`, `P`, `Λ` and `Ψ` only.
    pub fn linear_hash(&self) -> [u8; 32] {
        let full = serde_json::to_value(ProblemFile::from(self)).expect("serializable problem");
        let part: serde_json::Map<String, serde_json::Value> = ["n", "P", "Lambda", "Psi"]
            .iter()
            .map(|&k| (k.to_string(), full[k].clone()))
            .collect();
        let text = serde_json::to_string(&part).expect("serializable problem");
        Sha256::digest(text.as_bytes()).into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProblemFile::from(self)).expect("serializable problem")
    }
}

/// On-disk layout of a problem.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    #[serde(rename = "P")]
    pub poly: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "Lambda")]
    pub lambda: MeasureMatrix,
    #[serde(rename = "Psi")]
    pub psi: MeasureMatrix,
    pub g: GSpec,
    #[serde(default)]
    pub h: Option<HSpec>,
    pub p: TrigPoly,
    #[serde(default)]
    pub solve: Option<SolveConfig>,
}

impl From<&ProblemSpec> for ProblemFile {
    fn from(s: &ProblemSpec) -> Self {
        Self {
            n: s.n,
            poly: s
                .poly
                .coeffs()
                .iter()
                .map(|a| a.row_iter().map(|r| r.iter().copied().collect()).collect())
                .collect(),
            lambda: s.lambda.clone(),
            psi: s.psi.clone(),
            g: s.g.clone(),
            h: s.h.clone(),
            p: s.p.clone(),
            solve: s.solve.clone(),
        }
    }
}

impl TryFrom<ProblemFile> for ProblemSpec {
    type Error = Error;

    fn try_from(f: ProblemFile) -> Result<Self> {
        let n = f.n;
        let mut coeffs = Vec::with_capacity(f.poly.len());
        for (j, rows) in f.poly.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Schema {
                    path: format!("P[{j}]"),
                    message: format!("coefficient must be a {n}×{n} matrix"),
                });
            }
            coeffs.push(DMatrix::from_fn(n, n, |r, c| rows[r][c]));
        }
        let poly = MatrixPolynomial::new(coeffs)?;
        let spec = ProblemSpec {
            n,
            poly,
            lambda: f.lambda,
            psi: f.psi,
            g: f.g,
            h: f.h,
            p: f.p,
            solve: f.solve,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    ProblemSpec::try_from(file)
}
