//! Catalog of bounded nonlinearities `g` and perturbations `h`.
//!
//! Every `g` in the catalog carries its limits at infinity in closed form,
//! so the limit field `g_w` is computed exactly rather than estimated from
//! large-argument samples. The catalog kinds are continuous and have
//! uniform radial limits, which is what makes the upper semicontinuity
//! hypothesis on the limit field hold structurally.

use std::f64::consts::{FRAC_2_PI, PI};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bounded scalar profile `f: R → R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScalarProfile {
    /// `offset + amplitude · tanh(scale · (x - shift))`
    Tanh {
        amplitude: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        shift: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `offset + amplitude · (2/π) · atan(scale · (x - shift))`
    Atan {
        amplitude: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        shift: f64,
        #[serde(default)]
        offset: f64,
    },
    /// `value`
    Const { value: f64 },
    /// `amplitude · y / (1 + y²)` with `y = scale · x`; decays to zero.
    Bump {
        amplitude: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `amplitude · sin(scale · x)`; bounded but without limits at infinity.
    Sin {
        amplitude: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ScalarProfile {
    pub fn tanh(amplitude: f64) -> Self {
        Self::Tanh {
            amplitude,
            scale: 1.0,
            shift: 0.0,
            offset: 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Tanh { amplitude, scale, shift, offset } => offset + amplitude * (scale * (x - shift)).tanh(),
            Self::Atan { amplitude, scale, shift, offset } => {
                offset + amplitude * FRAC_2_PI * (scale * (x - shift)).atan()
            }
            Self::Const { value } => value,
            Self::Bump { amplitude, scale } => {
                let y = scale * x;
                amplitude * y / (1.0 + y * y)
            }
            Self::Sin { amplitude, scale } => amplitude * (scale * x).sin(),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Self::Tanh { amplitude, scale, shift, .. } => {
                let th = (scale * (x - shift)).tanh();
                amplitude * scale * (1.0 - th * th)
            }
            Self::Atan { amplitude, scale, shift, .. } => {
                let y = scale * (x - shift);
                amplitude * FRAC_2_PI * scale / (1.0 + y * y)
            }
            Self::Const { .. } => 0.0,
            Self::Bump { amplitude, scale } => {
                let y = scale * x;
                amplitude * scale * (1.0 - y * y) / (1.0 + y * y).powi(2)
            }
            Self::Sin { amplitude, scale } => amplitude * scale * (scale * x).cos(),
        }
    }

    /// `(f(-∞), f(+∞))` when both exist.
    pub fn limits(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Tanh { amplitude, scale, offset, .. } | Self::Atan { amplitude, scale, offset, .. } => {
                let s = if scale == 0.0 { 0.0 } else { scale.signum() };
                Some((offset - s * amplitude, offset + s * amplitude))
            }
            Self::Const { value } => Some((value, value)),
            Self::Bump { .. } => Some((0.0, 0.0)),
            Self::Sin { .. } => None,
        }
    }

    /// Limit in the direction of `sign` (`+1`, `-1`), or `f(0)` for zero.
    pub fn limit_towards(&self, sign: f64) -> Option<f64> {
        let (lo, hi) = self.limits()?;
        Some(if sign > 0.0 {
            hi
        } else if sign < 0.0 {
            lo
        } else {
            self.eval(0.0)
        })
    }

    pub fn sup(&self) -> f64 {
        match *self {
            Self::Tanh { amplitude, offset, .. } | Self::Atan { amplitude, offset, .. } => {
                offset.abs() + amplitude.abs()
            }
            Self::Const { value } => value.abs(),
            Self::Bump { amplitude, .. } => 0.5 * amplitude.abs(),
            Self::Sin { amplitude, .. } => amplitude.abs(),
        }
    }

    /// Upper bound on `|f(x) - f(±∞)|` for `|x| ≥ r`, same sign as `x`.
    pub fn tail_envelope(&self, r: f64) -> Option<f64> {
        match *self {
            Self::Tanh { amplitude, scale, shift, .. } => {
                let d = (r - shift.abs()).max(0.0) * scale.abs();
                Some(2.0 * amplitude.abs() * (-2.0 * d).exp())
            }
            Self::Atan { amplitude, scale, shift, .. } => {
                let d = (r - shift.abs()).max(0.0) * scale.abs();
                Some(if d > 0.0 { amplitude.abs() * FRAC_2_PI / d } else { 2.0 * amplitude.abs() })
            }
            Self::Const { .. } => Some(0.0),
            Self::Bump { amplitude, scale } => {
                let y = r * scale.abs();
                Some(if y > 0.0 { amplitude.abs() / y } else { 0.5 * amplitude.abs() })
            }
            Self::Sin { .. } => None,
        }
    }

    fn require_limits(&self, what: &str) -> Result<()> {
        match self.limits() {
            Some(_) => Ok(()),
            None => Err(Error::MissingLimits(format!(
                "{what} has no limits at infinity; g must have finite limits along every direction"
            ))),
        }
    }
}

/// Limit value of a sign-table nonlinearity for one sign pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignPattern {
    /// Entries `+1` or `-1`.
    pub sigma: Vec<i8>,
    pub value: Vec<f64>,
}

/// Catalog nonlinearity `g: R^N → R^N` with closed-form limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GSpec {
    /// `g_j(x) = f_j(x_j)`.
    Componentwise { profiles: Vec<ScalarProfile> },
    /// `g(x) = φ(|x|) · (A x/|x| + b)`, with `φ(r) → 1`.
    Radial {
        phi: ScalarProfile,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    /// The step field `g(x) = g(σ(x))` taking one value per open orthant,
    /// and `at_zero` whenever a component vanishes.
    SignTable { table: Vec<SignPattern>, at_zero: Vec<f64> },
}

/// Direction along which a limit at infinity is taken.
#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    Vector(DVector<f64>),
    Signs(Vec<i8>),
}

impl GSpec {
    pub fn componentwise(profiles: Vec<ScalarProfile>) -> Self {
        Self::Componentwise { profiles }
    }

    pub fn zero(n: usize) -> Self {
        Self::Componentwise {
            profiles: vec![ScalarProfile::Const { value: 0.0 }; n],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Componentwise { profiles } => profiles.len(),
            Self::Radial { b, .. } => b.len(),
            Self::SignTable { at_zero, .. } => at_zero.len(),
        }
    }

    /// Rejects entries without closed-form limits or with inconsistent shapes.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                what: "nonlinearity g",
                expected: n,
                found: self.dim(),
            });
        }
        match self {
            Self::Componentwise { profiles } => {
                for (j, p) in profiles.iter().enumerate() {
                    p.require_limits(&format!("profile of component {}", j + 1))?;
                }
            }
            Self::Radial { phi, a, .. } => {
                phi.require_limits("radial amplitude profile")?;
                let (_, hi) = phi.limits().unwrap_or((0.0, 0.0));
                if (hi - 1.0).abs() > 1e-12 {
                    return Err(Error::Semantic(format!(
                        "radial amplitude profile must tend to 1 at infinity, found {hi}"
                    )));
                }
                if a.len() != n || a.iter().any(|r| r.len() != n) {
                    return Err(Error::Semantic(format!("radial map A must be {n}×{n}")));
                }
            }
            Self::SignTable { table, at_zero } => {
                if table.len() != 1usize << n {
                    return Err(Error::Semantic(format!(
                        "sign table must list all {} sign patterns, found {}",
                        1usize << n,
                        table.len()
                    )));
                }
                let mut seen = std::collections::BTreeSet::new();
                for entry in table {
                    if entry.sigma.len() != n || entry.value.len() != n {
                        return Err(Error::Semantic("sign pattern has wrong length".into()));
                    }
                    if entry.sigma.iter().any(|s| *s != 1 && *s != -1) {
                        return Err(Error::Semantic("sign entries must be +1 or -1".into()));
                    }
                    seen.insert(entry.sigma.clone());
                }
                if seen.len() != table.len() {
                    return Err(Error::Semantic("sign table has duplicate patterns".into()));
                }
                if at_zero.len() != n {
                    return Err(Error::Semantic("at_zero has wrong length".into()));
                }
            }
        }
        Ok(())
    }

    fn radial_parts(a: &[Vec<f64>], b: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        let n = b.len();
        (
            DMatrix::from_fn(n, n, |i, j| a[i][j]),
            DVector::from_column_slice(b),
        )
    }

    fn table_lookup(&self, sigma: &[i8]) -> Option<DVector<f64>> {
        if let Self::SignTable { table, .. } = self {
            table
                .iter()
                .find(|e| e.sigma == sigma)
                .map(|e| DVector::from_column_slice(&e.value))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Self::Componentwise { profiles } => {
                DVector::from_iterator(x.len(), profiles.iter().zip(x.iter()).map(|(p, &v)| p.eval(v)))
            }
            Self::Radial { phi, a, b } => {
                let (am, bv) = Self::radial_parts(a, b);
                let r = x.norm();
                if r == 0.0 {
                    return bv * phi.eval(0.0);
                }
                (am * (x / r) + bv) * phi.eval(r)
            }
            Self::SignTable { at_zero, .. } => {
                if x.iter().any(|v| *v == 0.0) {
                    return DVector::from_column_slice(at_zero);
                }
                let sigma: Vec<i8> = x.iter().map(|v| if *v > 0.0 { 1 } else { -1 }).collect();
                self.table_lookup(&sigma).expect("validated sign table")
            }
        }
    }

    /// Jacobian `∇g(x)`; `None` for the discontinuous sign-table kind.
    pub fn jacobian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        match self {
            Self::Componentwise { profiles } => Some(DMatrix::from_diagonal(&DVector::from_iterator(
                x.len(),
                profiles.iter().zip(x.iter()).map(|(p, &v)| p.derivative(v)),
            ))),
            Self::Radial { phi, a, b } => {
                let n = x.len();
                let (am, bv) = Self::radial_parts(a, b);
                let r = x.norm();
                if r < 1e-300 {
                    return Some(am * phi.derivative(0.0));
                }
                let xh = x / r;
                let proj = DMatrix::identity(n, n) - &xh * xh.transpose();
                let g_dir = &am * &xh + bv;
                Some(g_dir * xh.transpose() * phi.derivative(r) + am * proj * (phi.eval(r) / r))
            }
            Self::SignTable { .. } => None,
        }
    }

    pub fn is_differentiable(&self) -> bool {
        !matches!(self, Self::SignTable { .. })
    }

    /// `lim_{s→∞} g(s v)` in closed form.
    ///
    /// For the componentwise kind a zero component `v_j = 0` contributes
    /// `g_j(0)`, which is the actual limit. The sign-table kind has no limit
    /// along directions with a zero component.
    pub fn radial_limit(&self, dir: &Direction) -> Result<DVector<f64>> {
        let n = self.dim();
        match dir {
            Direction::Vector(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch { what: "direction", expected: n, found: v.len() });
                }
                match self {
                    Self::Componentwise { profiles } => Ok(DVector::from_iterator(
                        n,
                        profiles
                            .iter()
                            .zip(v.iter())
                            .map(|(p, &s)| p.limit_towards(s).expect("validated limits")),
                    )),
                    Self::Radial { a, b, .. } => {
                        let r = v.norm();
                        if r == 0.0 {
                            return Err(Error::NullSetDirection);
                        }
                        let (am, bv) = Self::radial_parts(a, b);
                        Ok(am * (v / r) + bv)
                    }
                    Self::SignTable { .. } => {
                        if v.iter().any(|x| *x == 0.0) {
                            return Err(Error::NullSetDirection);
                        }
                        let sigma: Vec<i8> = v.iter().map(|x| if *x > 0.0 { 1 } else { -1 }).collect();
                        Ok(self.table_lookup(&sigma).expect("validated sign table"))
                    }
                }
            }
            Direction::Signs(sigma) => {
                if sigma.len() != n {
                    return Err(Error::DimensionMismatch { what: "sign pattern", expected: n, found: sigma.len() });
                }
                match self {
                    Self::SignTable { .. } => self
                        .table_lookup(sigma)
                        .ok_or_else(|| Error::Semantic(format!("sign pattern {sigma:?} not in table"))),
                    _ => {
                        let v = DVector::from_iterator(n, sigma.iter().map(|&s| s as f64));
                        self.radial_limit(&Direction::Vector(v))
                    }
                }
            }
        }
    }

    /// `g_u(t)` at one sample: the limit along `x` when `x ≠ 0`, else `g(0)`.
    /// Components with `|x_j| ≤ zero_tol` are treated as exact zeros.
    pub fn limit_field(&self, x: &DVector<f64>, zero_tol: f64) -> DVector<f64> {
        let cleaned = x.map(|v| if v.abs() <= zero_tol { 0.0 } else { v });
        if cleaned.iter().all(|v| *v == 0.0) {
            return self.eval(&cleaned);
        }
        match self.radial_limit(&Direction::Vector(cleaned.clone())) {
            Ok(v) => v,
            Err(_) => self.eval(&cleaned),
        }
    }

    /// Sign-table view `g(σ)` for all `2^N` patterns, in lexicographic order
    /// with `-1 < +1`.
    pub fn sign_patterns(&self) -> Vec<SignPattern> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| {
                let sigma: Vec<i8> = (0..n).map(|j| if mask >> (n - 1 - j) & 1 == 1 { 1 } else { -1 }).collect();
                let value = self
                    .radial_limit(&Direction::Signs(sigma.clone()))
                    .map(|v| v.iter().copied().collect())
                    .unwrap_or_default();
                SignPattern { sigma, value }
            })
            .collect()
    }

    /// Euclidean bound `|g|_∞`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Self::Componentwise { profiles } => profiles.iter().map(|p| p.sup().powi(2)).sum::<f64>().sqrt(),
            Self::Radial { phi, a, b } => {
                let (am, bv) = Self::radial_parts(a, b);
                let op = am.singular_values().max();
                phi.sup() * (op + bv.norm())
            }
            Self::SignTable { table, at_zero } => table
                .iter()
                .map(|e| e.value.iter().map(|v| v * v).sum::<f64>().sqrt())
                .chain(std::iter::once(at_zero.iter().map(|v| v * v).sum::<f64>().sqrt()))
                .fold(0.0, f64::max),
        }
    }

    /// Bound on `|g(s v) - g_v|` for a unit direction `v`.
    pub fn tail_envelope(&self, v: &DVector<f64>, s: f64) -> f64 {
        match self {
            Self::Componentwise { profiles } => profiles
                .iter()
                .zip(v.iter())
                .map(|(p, &vj)| {
                    if vj == 0.0 {
                        0.0
                    } else {
                        p.tail_envelope(s * vj.abs()).unwrap_or(f64::INFINITY).powi(2)
                    }
                })
                .sum::<f64>()
                .sqrt(),
            Self::Radial { phi, a, b } => {
                let (am, bv) = Self::radial_parts(a, b);
                phi.tail_envelope(s).unwrap_or(f64::INFINITY) * (am.singular_values().max() + bv.norm())
            }
            Self::SignTable { .. } => 0.0,
        }
    }

    /// Jump `g_j(+∞) - g_j(-∞)` per component, for the componentwise kind.
    pub fn component_jumps(&self) -> Result<Vec<f64>> {
        match self {
            Self::Componentwise { profiles } => Ok(profiles
                .iter()
                .map(|p| {
                    let (lo, hi) = p.limits().expect("validated limits");
                    hi - lo
                })
                .collect()),
            _ => Err(Error::NonComponentwise("g is not of componentwise kind".into())),
        }
    }
}

/// Time factor of an `h` term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TimeFactor {
    One,
    /// `cos(k t + phase)`
    Cos {
        k: i64,
        #[serde(default)]
        phase: f64,
    },
}

impl TimeFactor {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::One => 1.0,
            Self::Cos { k, phase } => (k as f64 * t + phase).cos(),
        }
    }
}

/// One term `coeff · f(u_input(t - delay)) · time(t)` in component `output`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HTerm {
    pub output: usize,
    pub input: usize,
    #[serde(default)]
    pub delay: f64,
    pub coeff: f64,
    pub profile: ScalarProfile,
    #[serde(default = "time_one")]
    pub time: TimeFactor,
}

fn time_one() -> TimeFactor {
    TimeFactor::One
}

/// Bounded perturbation `h(t, u_t)` built from point evaluations of `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSpec {
    pub terms: Vec<HTerm>,
    /// Declared claim that `h` never has a component along the kernel basis.
    #[serde(default)]
    pub kernel_orthogonal: bool,
}

impl HSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.output >= n || t.input >= n {
                return Err(Error::Semantic(format!("h term {i} references a component outside 0..{n}")));
            }
            if !(t.delay.is_finite() && t.coeff.is_finite()) {
                return Err(Error::Semantic(format!("h term {i} is not finite")));
            }
        }
        Ok(())
    }

    /// Euclidean bound `|h|_∞`.
    pub fn sup_bound(&self, n: usize) -> f64 {
        let mut per = vec![0.0; n];
        for t in &self.terms {
            per[t.output] += t.coeff.abs() * t.profile.sup();
        }
        per.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sup bound of the components listed in `comps` only.
    pub fn sup_bound_on(&self, n: usize, comps: &[usize]) -> f64 {
        let mut per = vec![0.0; n];
        for t in self.terms.iter().filter(|t| comps.contains(&t.output)) {
            per[t.output] += t.coeff.abs() * t.profile.sup();
        }
        per.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Components that some term writes to.
    pub fn outputs(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.terms.iter().map(|t| t.output).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn has_time_dependence(&self) -> bool {
        self.terms.iter().any(|t| t.time != TimeFactor::One)
    }
}

/// `(2/π) atan` helper kept for tests of the profile family.
#[allow(dead_code)]
fn atan_unit(y: f64) -> f64 {
    y.atan() * 2.0 / PI
}
