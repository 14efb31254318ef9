//! Ready-made problems: delayed Duffing equations, a Gompertz-type system,
//! a weakly coupled system, two distributed-delay equations and a beam-like
//! equation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{DensityProfile, MeasureMatrix, ScalarMeasure};
use crate::nonlinear::{GSpec, HSpec, HTerm, ScalarProfile, TimeFactor};
use crate::problem::{MatrixPolynomial, ProblemSpec};
use crate::solver::SolveConfig;
use crate::trigpoly::{CVector, TrigPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleId {
    DuffingDelay,
    DuffingDistributed,
    GompertzSystem,
    WeaklyCoupled,
    DistributedUniform,
    DistributedSine,
    Beam,
}

impl ExampleId {
    pub const ALL: [ExampleId; 7] = [
        Self::DuffingDelay,
        Self::DuffingDistributed,
        Self::GompertzSystem,
        Self::WeaklyCoupled,
        Self::DistributedUniform,
        Self::DistributedSine,
        Self::Beam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DuffingDelay => "duffing-delay",
            Self::DuffingDistributed => "duffing-distributed",
            Self::GompertzSystem => "gompertz-system",
            Self::WeaklyCoupled => "weakly-coupled",
            Self::DistributedUniform => "distributed-uniform",
            Self::DistributedSine => "distributed-sine",
            Self::Beam => "beam",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Resonant frequency `m` and forcing amplitude `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExampleParams {
    pub m: u32,
    pub c: f64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self { m: 1, c: 1.0 }
    }
}

/// Delay used by the Duffing examples.
pub const DUFFING_TAU: f64 = FRAC_PI_2;

fn tanh_g(n: usize) -> GSpec {
    GSpec::componentwise(vec![ScalarProfile::tanh(1.0); n])
}

fn cos_forcing(m: u32, c: f64) -> TrigPoly {
    TrigPoly::scalar_cos_sin(m as usize, c, 0.0)
}

fn with_solve(mut prob: ProblemSpec, kmax: usize) -> ProblemSpec {
    prob.solve = Some(SolveConfig::with_kmax(kmax));
    prob
}

/// `u'' + m²u + g(Ψ̃u) = c cos(mt)` with `Ψ` a delay by `π/2`.
pub fn duffing_delay(params: ExampleParams) -> Result<ProblemSpec> {
    let m = params.m as f64;
    let prob = ProblemSpec::new(
        MatrixPolynomial::scalar(&[m * m, 0.0, 1.0])?,
        MeasureMatrix::zero(1),
        MeasureMatrix::scalar(ScalarMeasure::delay(DUFFING_TAU, 1.0)),
        tanh_g(1),
        None,
        cos_forcing(params.m, params.c),
    )?;
    Ok(with_solve(prob, 64))
}

/// Duffing equation with `Ψ` the average over `[-π/2, 0]`.
pub fn duffing_distributed(params: ExampleParams) -> Result<ProblemSpec> {
    let m = params.m as f64;
    let tau = DUFFING_TAU;
    let psi = ScalarMeasure::density(-tau, 0.0, DensityProfile::Const { c: 1.0 / tau })?;
    let prob = ProblemSpec::new(
        MatrixPolynomial::scalar(&[m * m, 0.0, 1.0])?,
        MeasureMatrix::zero(1),
        MeasureMatrix::scalar(psi),
        tanh_g(1),
        None,
        cos_forcing(params.m, params.c),
    )?;
    Ok(with_solve(prob, 64))
}

/// First-order system whose first equation resonates at `k = ±1` through a
/// delay of `π/2`; the second equation is nonresonant and carries a
/// perturbation `h` that never touches the kernel component.
pub fn gompertz_system(params: ExampleParams) -> Result<ProblemSpec> {
    let second = ScalarMeasure::dirac(0.0, 2.0).plus(&ScalarMeasure::delay(1.0, 0.5));
    let lambda = MeasureMatrix::diagonal(vec![ScalarMeasure::delay(FRAC_PI_2, 1.0), second.clone()]);
    let psi = MeasureMatrix::diagonal(vec![ScalarMeasure::delay(FRAC_PI_2, 1.0), second]);
    let g = GSpec::componentwise(vec![ScalarProfile::tanh(1.0), ScalarProfile::Const { value: 0.0 }]);
    let h = HSpec {
        terms: vec![HTerm {
            output: 1,
            input: 0,
            delay: 0.7,
            coeff: 0.5,
            profile: ScalarProfile::tanh(1.0),
            time: TimeFactor::Cos { k: 1, phase: 0.0 },
        }],
        kernel_orthogonal: true,
    };
    let mut p = TrigPoly::zeros(2, 1);
    p.set_coeff(1, CVector::from_vec(vec![Complex64::new(0.5 * params.c, 0.0), Complex64::new(0.0, 0.0)]));
    let prob = ProblemSpec::new(
        MatrixPolynomial::scalar_identity(2, &[0.0, 1.0])?,
        lambda,
        psi,
        g,
        Some(h),
        p,
    )?;
    Ok(with_solve(prob, 32))
}

/// Two oscillators `u_j'' + m²u_j + g_j(Ψ̃u_j) + h_j(u) = p_j` coupled only
/// through small decaying terms.
pub fn weakly_coupled(params: ExampleParams) -> Result<ProblemSpec> {
    let m = params.m as f64;
    let lambda = MeasureMatrix::scalar_identity(2, &ScalarMeasure::dirac(0.0, m * m));
    let psi = MeasureMatrix::scalar_identity(2, &ScalarMeasure::delay(FRAC_PI_3, 1.0));
    let g = GSpec::componentwise(vec![
        ScalarProfile::tanh(1.0),
        ScalarProfile::Tanh { amplitude: 0.5, scale: 2.0, shift: 0.0, offset: 0.0 },
    ]);
    let bump = ScalarProfile::Bump { amplitude: 1.0, scale: 1.0 };
    let h = HSpec {
        terms: vec![
            HTerm { output: 0, input: 1, delay: 0.0, coeff: 0.05, profile: bump.clone(), time: TimeFactor::One },
            HTerm { output: 1, input: 0, delay: 0.0, coeff: 0.05, profile: bump, time: TimeFactor::One },
        ],
        kernel_orthogonal: false,
    };
    let mut p = TrigPoly::zeros(2, params.m as usize);
    p.set_coeff(
        params.m as usize,
        CVector::from_vec(vec![Complex64::new(0.3 * params.c, 0.0), Complex64::new(0.0, -0.2 * params.c)]),
    );
    let prob = ProblemSpec::new(
        MatrixPolynomial::new(vec![DMatrix::zeros(2, 2), DMatrix::zeros(2, 2), DMatrix::identity(2, 2)])?,
        lambda,
        psi,
        g,
        Some(h),
        p,
    )?;
    Ok(with_solve(prob, 32))
}

/// `u' + α∫β(s)u(t+s)ds + g(∫β(s)u(t+s)ds) = p` with `β` supported on `[-π/m, 0]`.
fn distributed(params: ExampleParams, alpha: f64, beta: DensityProfile) -> Result<ProblemSpec> {
    let m = params.m as f64;
    let a = -PI / m;
    let scaled = match &beta {
        DensityProfile::Const { c } => DensityProfile::Const { c: alpha * c },
        DensityProfile::Sin { c, omega, phase } => DensityProfile::Sin { c: alpha * c, omega: *omega, phase: *phase },
        DensityProfile::Poly { coeffs } => DensityProfile::Poly { coeffs: coeffs.iter().map(|x| alpha * x).collect() },
    };
    let prob = ProblemSpec::new(
        MatrixPolynomial::scalar(&[0.0, 1.0])?,
        MeasureMatrix::scalar(ScalarMeasure::density(a, 0.0, scaled)?),
        MeasureMatrix::scalar(ScalarMeasure::density(a, 0.0, beta)?),
        tanh_g(1),
        None,
        cos_forcing(params.m, params.c),
    )?;
    Ok(with_solve(prob, 32))
}

/// Uniform `β = 1` on `[-π/m, 0]` with `α = m/2`.
pub fn distributed_uniform(params: ExampleParams) -> Result<ProblemSpec> {
    distributed(params, params.m as f64 / 2.0, DensityProfile::Const { c: 1.0 })
}

/// `β(s) = -(m/2) sin(ms)` on `[-π/m, 0]` with `α = 4m/π`.
pub fn distributed_sine(params: ExampleParams) -> Result<ProblemSpec> {
    let m = params.m as f64;
    distributed(
        params,
        4.0 * m / PI,
        DensityProfile::Sin { c: -m / 2.0, omega: m, phase: 0.0 },
    )
}

/// `u'''' + (m₁² + m₂²)u'' + m₁²m₂²u + g(u) = p` with `m₁ = 1`, `m₂ = 2`.
pub fn beam(_params: ExampleParams) -> Result<ProblemSpec> {
    let (m1, m2) = (1.0f64, 2.0f64);
    let mut p = TrigPoly::zeros(1, 2);
    p.set_coeff(1, CVector::from_element(1, Complex64::new(0.15, 0.0)));
    p.set_coeff(2, CVector::from_element(1, Complex64::new(0.1, 0.0)));
    let prob = ProblemSpec::new(
        MatrixPolynomial::scalar(&[m1 * m1 * m2 * m2, 0.0, m1 * m1 + m2 * m2, 0.0, 1.0])?,
        MeasureMatrix::zero(1),
        MeasureMatrix::scalar(ScalarMeasure::dirac(0.0, 1.0)),
        tanh_g(1),
        None,
        p,
    )?;
    Ok(with_solve(prob, 32))
}

pub fn emit_example(id: ExampleId, params: ExampleParams) -> Result<ProblemSpec> {
    match id {
        ExampleId::DuffingDelay => duffing_delay(params),
        ExampleId::DuffingDistributed => duffing_distributed(params),
        ExampleId::GompertzSystem => gompertz_system(params),
        ExampleId::WeaklyCoupled => weakly_coupled(params),
        ExampleId::DistributedUniform => distributed_uniform(params),
        ExampleId::DistributedSine => distributed_sine(params),
        ExampleId::Beam => beam(params),
    }
}
