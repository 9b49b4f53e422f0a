//! Linear difference operators `L(f) = Σ a_j f(z + j c)`, differential parts
//! `Σ b_j f^{(j)} + b_0`, recurrences with expression coefficients, and
//! pointwise residual checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{format_complex, parse_complex};
use crate::sampling::{disk_points, par_map};
use crate::{ComplexPoly, Expr};

/// Samples whose singularity margin (see [`Expr::singularity_margin`]) falls
/// below this are skipped by default.
pub const DEFAULT_POLE_MARGIN: f64 = 1e-3;
/// Floor for the `|A f(z)|` denominator of the relative residual.
pub const RELATIVE_FLOOR: f64 = 1e-30;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearDifferenceOperator {
    shift: Complex64,
    coeffs: Vec<Complex64>,
    coefficient_sum: Complex64,
}

impl LinearDifferenceOperator {
    /// `coeffs` are `a_0..a_n`; needs `n >= 1`, `a_n != 0`, `c != 0`.
    pub fn new(shift: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if shift == czero() || !shift.is_finite() {
            return Err(Error::invalid("shift c must be a nonzero finite number"));
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("operator order must be at least 1"));
        }
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        if *coeffs.last().expect("nonempty") == czero() {
            return Err(Error::invalid("leading coefficient a_n must be nonzero"));
        }
        let coefficient_sum = coeffs.iter().sum();
        Ok(LinearDifferenceOperator { shift, coeffs, coefficient_sum })
    }

    /// The forward difference `Δ_c^n`, `a_j = (-1)^{n-j} C(n, j)`.
    pub fn delta_n(shift: Complex64, n: usize) -> Result<Self> {
        if n == 0 || n > 50 {
            return Err(Error::invalid("difference order must be between 1 and 50"));
        }
        let coeffs = (0..=n)
            .map(|j| {
                let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * binomial(n, j), 0.0)
            })
            .collect();
        Self::new(shift, coeffs)
    }

    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient_sum(&self) -> Complex64 {
        self.coefficient_sum
    }

    /// `Σ a_j f(z + j c)` as an expression tree; zero coefficients are dropped.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc: Option<Expr> = None;
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == czero() {
                continue;
            }
            let shifted = f.shift(self.shift * j as f64);
            let term = if a == Complex64::new(1.0, 0.0) { shifted } else { Expr::constant(a) * shifted };
            acc = Some(match acc {
                None => term,
                Some(s) => s + term,
            });
        }
        acc.unwrap_or_else(Expr::zero)
    }

    /// `Σ a_j f(z + j c)` by direct evaluation; `None` if any shift is singular.
    pub fn eval_applied(&self, f: &Expr, z: Complex64) -> Option<Complex64> {
        let mut s = czero();
        for (j, a) in self.coeffs.iter().enumerate() {
            s += a * f.eval(z + self.shift * j as f64).value()?;
        }
        Some(s)
    }

    /// `P(w) = Σ a_j w^j - A`.
    pub fn characteristic_poly(&self, eigenvalue: Complex64) -> ComplexPoly {
        let mut c = self.coeffs.clone();
        c[0] -= eigenvalue;
        ComplexPoly::new(c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "shift": format_complex(self.shift),
            "coeffs": self.coeffs.iter().map(|&a| format_complex(a)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let wire: OperatorWire = serde_json::from_value(v.clone())
            .map_err(|e| Error::Format { text: v.to_string(), msg: e.to_string() })?;
        Self::new(parse_complex(&wire.shift)?, parse_list(&wire.coeffs)?)
    }
}

#[derive(Deserialize)]
struct OperatorWire {
    shift: String,
    coeffs: Vec<String>,
}

#[derive(Deserialize)]
struct MixedWire {
    shift: String,
    coeffs: Vec<String>,
    diff_coeffs: Vec<String>,
    #[serde(default)]
    b0: Option<String>,
}

fn parse_list(items: &[String]) -> Result<Vec<Complex64>> {
    items.iter().map(|s| parse_complex(s)).collect()
}

/// `L_k[f] = b_k f^{(k)} + ... + b_1 f' + b_0`, with `b_0` entering additively.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDifferentialOperator {
    coeffs: Vec<Complex64>,
    b0: Complex64,
}

impl LinearDifferentialOperator {
    /// `coeffs` are `b_1..b_k`; needs `k >= 1` and `b_k != 0`.
    pub fn new(coeffs: Vec<Complex64>, b0: Complex64) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::invalid("differential order must be at least 1")),
            Some(&b) if b == czero() => Err(Error::invalid("leading coefficient b_k must be nonzero")),
            _ => Ok(LinearDifferentialOperator { coeffs, b0 }),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn b0(&self) -> Complex64 {
        self.b0
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc = if self.b0 == czero() { None } else { Some(Expr::constant(self.b0)) };
        let mut d = f.clone();
        for &b in &self.coeffs {
            d = d.derivative();
            if b == czero() {
                continue;
            }
            let term = if b == Complex64::new(1.0, 0.0) { d.clone() } else { Expr::constant(b) * d.clone() };
            acc = Some(match acc {
                None => term,
                Some(s) => term + s,
            });
        }
        acc.unwrap_or_else(Expr::zero)
    }
}

/// `L(f) + L_k[f]`.
pub fn apply_mixed(dop: &LinearDifferenceOperator, lop: &LinearDifferentialOperator, f: &Expr) -> Expr {
    dop.apply(f) + lop.apply(f)
}

pub fn mixed_from_json(v: &serde_json::Value) -> Result<(LinearDifferenceOperator, LinearDifferentialOperator)> {
    let wire: MixedWire =
        serde_json::from_value(v.clone()).map_err(|e| Error::Format { text: v.to_string(), msg: e.to_string() })?;
    let dop = LinearDifferenceOperator::new(parse_complex(&wire.shift)?, parse_list(&wire.coeffs)?)?;
    let b0 = match wire.b0 {
        Some(s) => parse_complex(&s)?,
        None => czero(),
    };
    let lop = LinearDifferentialOperator::new(parse_list(&wire.diff_coeffs)?, b0)?;
    Ok((dop, lop))
}

pub fn mixed_to_json(dop: &LinearDifferenceOperator, lop: &LinearDifferentialOperator) -> serde_json::Value {
    let mut v = dop.to_json();
    v["diff_coeffs"] = lop.coeffs.iter().map(|&b| format_complex(b)).collect::<Vec<_>>().into();
    v["b0"] = format_complex(lop.b0).into();
    v
}

/// `Σ b_j(z) f(z + j η) = b(z)` with arbitrary expression coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprRecurrence {
    pub coeffs: Vec<Expr>,
    pub rhs: Expr,
    pub step: Complex64,
}

impl ExprRecurrence {
    pub fn new(coeffs: Vec<Expr>, rhs: Expr, step: Complex64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("recurrence needs at least one coefficient"));
        }
        if step == czero() {
            return Err(Error::invalid("recurrence step must be nonzero"));
        }
        Ok(ExprRecurrence { coeffs, rhs, step })
    }

    /// Parses `"b0; b1; ...; bn"`.
    pub fn parse(coeffs: &str, rhs: &str, step: Complex64) -> Result<Self> {
        let cs = coeffs.split(';').map(|s| crate::expr::parse(s.trim())).collect::<Result<Vec<_>>>()?;
        Self::new(cs, crate::expr::parse(rhs)?, step)
    }

    /// `Σ b_j(z) f(z + j η) - b(z)` as an expression tree.
    pub fn apply(&self, f: &Expr) -> Expr {
        let lhs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_const_zero())
            .map(|(j, b)| b.clone() * f.shift(self.step * j as f64))
            .reduce(|a, b| a + b)
            .unwrap_or_else(Expr::zero);
        lhs - self.rhs.clone()
    }
}

/// Which statistic [`ResidualReport::headline`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `|L f - A f| / max(|A f|, 1e-30)`.
    Relative,
    /// `|L f - A f| / (Σ |a_j f(z + j c)| + |A f|)`, or the analogous sum of
    /// term magnitudes for recurrences.
    Scaled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub samples: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub max_scaled: f64,
    pub measure: Measure,
    /// Sample attaining the headline maximum.
    pub worst: Option<Complex64>,
    /// Pole-flagged samples or samples too close to a singularity.
    pub skipped: Vec<Complex64>,
}

impl ResidualReport {
    pub fn evaluated(&self) -> usize {
        self.samples - self.skipped.len()
    }

    pub fn headline(&self) -> f64 {
        match self.measure {
            Measure::Relative => self.max_rel,
            Measure::Scaled => self.max_scaled,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.headline() < tol
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "samples": self.samples,
            "evaluated": self.evaluated(),
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "max_scaled": self.max_scaled,
            "measure": self.measure,
            "worst": self.worst.map(format_complex),
            "skipped": self.skipped.iter().map(|&z| format_complex(z)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualOptions {
    pub samples: Vec<Complex64>,
    /// Skip samples where any evaluated shift has a singularity margin below this.
    pub pole_margin: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions { samples: disk_points(100, 5.0), pole_margin: DEFAULT_POLE_MARGIN }
    }
}

impl ResidualOptions {
    pub fn with_samples(samples: Vec<Complex64>) -> Self {
        ResidualOptions { samples, ..Default::default() }
    }
}

/// One sample: the terms whose sum should equal `target`.
struct Terms {
    terms: Vec<Complex64>,
    target: Complex64,
}

fn reduce<G>(opts: &ResidualOptions, measure: Measure, eval: G) -> Result<ResidualReport>
where
    G: Fn(Complex64) -> Option<Terms> + Sync + Send,
{
    if opts.samples.is_empty() {
        return Err(Error::invalid("residual needs at least one sample"));
    }
    let results = par_map(&opts.samples, |&z| eval(z));
    let mut report = ResidualReport {
        samples: opts.samples.len(),
        max_abs: 0.0,
        max_rel: 0.0,
        max_scaled: 0.0,
        measure,
        worst: None,
        skipped: Vec::new(),
    };
    let mut best = -1.0;
    for (z, r) in opts.samples.iter().zip(results) {
        let Some(t) = r else {
            report.skipped.push(*z);
            continue;
        };
        let lhs: Complex64 = t.terms.iter().sum();
        let abs = (lhs - t.target).norm();
        let rel = abs / t.target.norm().max(RELATIVE_FLOOR);
        let scale = t.terms.iter().map(|v| v.norm()).sum::<f64>() + t.target.norm();
        let scaled = if abs == 0.0 { 0.0 } else { abs / scale.max(f64::MIN_POSITIVE) };
        report.max_abs = report.max_abs.max(abs);
        report.max_rel = report.max_rel.max(rel);
        report.max_scaled = report.max_scaled.max(scaled);
        let head = if measure == Measure::Relative { rel } else { scaled };
        if head > best {
            best = head;
            report.worst = Some(*z);
        }
    }
    if report.evaluated() == 0 {
        return Err(Error::AllSamplesSingular { count: report.samples });
    }
    Ok(report)
}

fn eval_guarded(f: &Expr, z: Complex64, margin: f64) -> Option<Complex64> {
    if margin > 0.0 && f.singularity_margin(z) < margin {
        return None;
    }
    f.eval(z).value()
}

/// Checks `L f ≡ A f` pointwise. The headline is the relative residual when
/// `A != 0` and the scaled residual otherwise.
pub fn residual(
    op: &LinearDifferenceOperator,
    f: &Expr,
    eigenvalue: Complex64,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let measure = if eigenvalue == czero() { Measure::Scaled } else { Measure::Relative };
    reduce(opts, measure, |z| {
        let mut terms = Vec::with_capacity(op.coeffs.len());
        let mut f0 = czero();
        for (j, a) in op.coeffs.iter().enumerate() {
            let v = eval_guarded(f, z + op.shift * j as f64, opts.pole_margin)?;
            if j == 0 {
                f0 = v;
            }
            terms.push(a * v);
        }
        Some(Terms { terms, target: eigenvalue * f0 })
    })
}

/// Checks `L f + L_k[f] ≡ A f` pointwise.
pub fn residual_mixed(
    dop: &LinearDifferenceOperator,
    lop: &LinearDifferentialOperator,
    f: &Expr,
    eigenvalue: Complex64,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let derivs: Vec<Expr> = (1..=lop.order()).scan(f.clone(), |d, _| {
        *d = d.derivative();
        Some(d.clone())
    })
    .collect();
    let measure = if eigenvalue == czero() { Measure::Scaled } else { Measure::Relative };
    reduce(opts, measure, |z| {
        let mut terms = Vec::new();
        let f0 = eval_guarded(f, z, opts.pole_margin)?;
        for (j, a) in dop.coeffs.iter().enumerate() {
            terms.push(a * eval_guarded(f, z + dop.shift * j as f64, opts.pole_margin)?);
        }
        for (b, d) in lop.coeffs.iter().zip(&derivs) {
            terms.push(b * d.eval(z).value()?);
        }
        terms.push(lop.b0);
        Some(Terms { terms, target: eigenvalue * f0 })
    })
}

/// Checks `Σ b_j(z) f(z + j η) = b(z)` pointwise; the headline is the scaled
/// residual `|lhs - b| / (Σ |b_j f(z + j η)| + |b|)`.
pub fn residual_recurrence(rec: &ExprRecurrence, f: &Expr, opts: &ResidualOptions) -> Result<ResidualReport> {
    reduce(opts, Measure::Scaled, |z| {
        let mut terms = Vec::with_capacity(rec.coeffs.len());
        for (j, b) in rec.coeffs.iter().enumerate() {
            let bj = eval_guarded(b, z, opts.pole_margin)?;
            let fj = eval_guarded(f, z + rec.step * j as f64, opts.pole_margin)?;
            terms.push(bj * fj);
        }
        let target = eval_guarded(&rec.rhs, z, opts.pole_margin)?;
        Some(Terms { terms, target })
    })
}

/// Estimates `A = L f (z0) / f(z0)`, trying `z0` and then the default sample
/// points until `f` is regular and nonzero.
pub fn detect_eigenvalue(op: &LinearDifferenceOperator, f: &Expr, z0: Complex64) -> Result<Complex64> {
    for z in std::iter::once(z0).chain(disk_points(100, 5.0)) {
        let Some(fz) = f.eval(z).value() else { continue };
        if fz.norm() < 1e-8 {
            continue;
        }
        if let Some(lf) = op.eval_applied(f, z) {
            return Ok(lf / fz);
        }
    }
    Err(Error::Degenerate("f vanishes or is singular at every reference point".into()))
}
