//! Desk-scale estimates of Nevanlinna functionals.
//!
//! Everything here is evaluated on finitely many circles, so asymptotic
//! statements only ever appear as ratios and slopes at fixed radii.

mod properties;
mod zeros;

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::expr::{BinOp, Expr, LogOutcome, LogValue};
use crate::format::{fmt_g, format_complex, parse_complex};
use crate::sampling::{pairwise_sum, par_map};
use crate::{Error, Result};

pub use properties::{
    characteristic_at, degree_law_ratio, first_main_theorem_gap, shift_deviation,
    shift_ratio_band, BandCheck,
};
pub use zeros::{count_zeros, reciprocal, ZeroList};

pub const DEFAULT_NODES: usize = 512;
pub const MIN_NODES: usize = 64;
/// Effective node density reached when refining around singular nodes.
pub const MAX_REFINED_NODES: usize = 8192;
/// Fraction of singular nodes above which a circle is rejected.
pub const MAX_POLE_FRACTION: f64 = 0.2;
pub const MIN_GRID_RADII: usize = 8;
/// Margin by which `λ̂` must undercut `σ̂` for a Borel-exceptional verdict.
pub const BOREL_MARGIN: f64 = 0.2;

/// A value `a ∈ ℂ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Finite(Complex64),
    Infinity,
}

impl Target {
    pub fn zero() -> Self {
        Target::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "infinity" | "∞" | "oo" => Ok(Target::Infinity),
            t => parse_complex(t).map(Target::Finite),
        }
    }

    /// The function whose zeros are the `a`-points of `f`.
    pub fn preimage_function(&self, f: &Expr) -> Expr {
        match self {
            Target::Finite(a) => minus_constant(f, *a),
            Target::Infinity => reciprocal(f),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Finite(a) => f.write_str(&format_complex(*a)),
            Target::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `f − a`, cancelling against an additive constant of `f` where there is
/// one, so that `(b·e^z + a) − a` does not lose `b·e^z` to rounding.
pub fn minus_constant(f: &Expr, a: Complex64) -> Expr {
    if a == Complex64::new(0.0, 0.0) {
        return f.clone();
    }
    let rebuild = |x: &Expr, c: Complex64| {
        if c == Complex64::new(0.0, 0.0) {
            x.clone()
        } else {
            x.clone() + Expr::constant(c)
        }
    };
    match f {
        Expr::Const(c) => Expr::constant(c - a),
        Expr::Binary(BinOp::Add, x, y) => match (x.as_const(), y.as_const()) {
            (_, Some(c)) => rebuild(x, c - a),
            (Some(c), _) => rebuild(y, c - a),
            _ => f.clone() - Expr::constant(a),
        },
        Expr::Binary(BinOp::Sub, x, y) => match y.as_const() {
            Some(c) => rebuild(x, -c - a),
            None => f.clone() - Expr::constant(a),
        },
        _ => f.clone() - Expr::constant(a),
    }
}

/// Radii and quadrature density for a characteristic sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    radii: Vec<f64>,
    nodes: usize,
}

impl RadialGrid {
    pub fn new(radii: Vec<f64>, nodes: usize) -> Result<Self> {
        if radii.len() < MIN_GRID_RADII {
            return Err(Error::invalid(format!(
                "a grid needs at least {MIN_GRID_RADII} radii, got {}",
                radii.len()
            )));
        }
        if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::invalid("radii must be positive and finite"));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("radii must be strictly increasing"));
        }
        if nodes < MIN_NODES {
            return Err(Error::invalid(format!("need at least {MIN_NODES} nodes per circle")));
        }
        Ok(RadialGrid { radii, nodes })
    }

    /// `count` radii in geometric progression from `rmin` to `rmax`.
    pub fn geometric(rmin: f64, rmax: f64, count: usize, nodes: usize) -> Result<Self> {
        if !(rmin > 0.0 && rmax > rmin) || count < 2 {
            return Err(Error::invalid("geometric grid needs 0 < rmin < rmax and count >= 2"));
        }
        let q = (rmax / rmin).ln() / (count - 1) as f64;
        let mut radii: Vec<f64> = (0..count).map(|k| rmin * (q * k as f64).exp()).collect();
        radii[count - 1] = rmax;
        RadialGrid::new(radii, nodes)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn rmax(&self) -> f64 {
        *self.radii.last().expect("grid is never empty")
    }

    /// Upper half of the radii, used by every slope fit.
    pub fn top_half(&self) -> &[f64] {
        &self.radii[self.radii.len() / 2..]
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        RadialGrid::geometric(5.0, 200.0, 12, DEFAULT_NODES).expect("default grid is valid")
    }
}

enum Node {
    Value(f64),
    Singular,
}

fn log_plus_at(g: &Expr, z: Complex64, inverted: bool) -> Node {
    match g.eval_log(z) {
        LogOutcome::Value(LogValue::Log(l)) => {
            let v = if inverted { -l.re } else { l.re };
            if v.is_finite() {
                Node::Value(v.max(0.0))
            } else {
                Node::Singular
            }
        }
        LogOutcome::Value(LogValue::Zero) => {
            if inverted {
                Node::Singular
            } else {
                Node::Value(0.0)
            }
        }
        LogOutcome::Pole | LogOutcome::Overflow => {
            if inverted {
                Node::Value(0.0)
            } else {
                Node::Singular
            }
        }
    }
}

/// Mean of `log⁺|g|` (or `log⁺ 1/|g|`) over the circle `|z| = r`.
fn circle_mean(g: &Expr, r: f64, nodes: usize, inverted: bool) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    if nodes < MIN_NODES {
        return Err(Error::invalid(format!("need at least {MIN_NODES} nodes per circle")));
    }
    let h = TAU / nodes as f64;
    let idx: Vec<usize> = (0..nodes).collect();
    let raw = par_map(&idx, |&k| log_plus_at(g, Complex64::from_polar(r, h * k as f64), inverted));
    let flagged: Vec<usize> =
        raw.iter().enumerate().filter(|(_, n)| matches!(n, Node::Singular)).map(|(k, _)| k).collect();
    if flagged.len() as f64 > MAX_POLE_FRACTION * nodes as f64 {
        return Err(Error::TooManyPoles { flagged: flagged.len(), total: nodes, radius: r });
    }
    // Each singular node is replaced by the mean over a finer grid of its
    // own cell; log singularities are integrable so the cell mean is finite.
    let sub = (MAX_REFINED_NODES / nodes).max(2);
    let refined = par_map(&flagged, |&k| {
        let vals: Vec<f64> = (0..sub)
            .filter_map(|j| {
                let theta = h * k as f64 + h * ((j as f64 + 0.5) / sub as f64 - 0.5);
                match log_plus_at(g, Complex64::from_polar(r, theta), inverted) {
                    Node::Value(v) => Some(v),
                    Node::Singular => None,
                }
            })
            .collect();
        if vals.is_empty() {
            0.0
        } else {
            pairwise_sum(&vals) / vals.len() as f64
        }
    });
    let mut values: Vec<f64> = raw
        .iter()
        .map(|n| match n {
            Node::Value(v) => *v,
            Node::Singular => 0.0,
        })
        .collect();
    for (k, v) in flagged.iter().zip(refined) {
        values[*k] = v;
    }
    Ok(pairwise_sum(&values) / nodes as f64)
}

/// `m(r, f)` by the trapezoid rule on `nodes` equispaced angles.
pub fn proximity(f: &Expr, r: f64, nodes: usize) -> Result<f64> {
    circle_mean(f, r, nodes, false)
}

/// `m(r, 1/(f − a))`, or `m(r, f)` for `a = ∞`.
pub fn proximity_to(f: &Expr, a: Target, r: f64, nodes: usize) -> Result<f64> {
    match a {
        Target::Finite(a) => {
            let g = minus_constant(f, a);
            if g.is_const_zero() {
                return Err(Error::Degenerate("f − a vanishes identically".into()));
            }
            circle_mean(&g, r, nodes, true)
        }
        Target::Infinity => circle_mean(f, r, nodes, false),
    }
}

/// Poles of `f` with `|p| < r`, found as zeros of `1/f`.
pub fn poles(f: &Expr, r: f64) -> Result<Vec<(Complex64, usize)>> {
    if f.is_entire() {
        return Ok(Vec::new());
    }
    Ok(count_zeros(&reciprocal(f), r)?.zeros)
}

/// `N(r)` for the given points: `Σ log(r/|p|)` plus `n(0)·log r`.
pub fn counting_from(points: &[(Complex64, usize)], r: f64) -> f64 {
    let terms: Vec<f64> = points
        .iter()
        .filter(|p| p.0.norm() < r)
        .map(|&(p, m)| {
            let rho = p.norm();
            let l = if rho == 0.0 { r.ln() } else { (r / rho).ln() };
            m as f64 * l
        })
        .collect();
    pairwise_sum(&terms)
}

/// `N(r, f)`.
pub fn counting(f: &Expr, r: f64) -> Result<f64> {
    Ok(counting_from(&poles(f, r)?, r))
}

/// Flags attached to an order estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFlag {
    /// `T` is (numerically) constant; order reported as 0.
    Degenerate,
    /// `T` is fitted by `α log r + β`; order reported as 0.
    LogarithmicGrowth,
    /// Slope above 5; the estimate is not meaningful.
    ExceedsFive,
    /// `log log T` undefined on part of the fit range.
    HyperOrderUnavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub order: f64,
    pub hyper_order: Option<f64>,
    /// Least-squares slope of `log T` against `log r`, before any
    /// growth-class decision.
    pub raw_slope: f64,
    pub flags: Vec<OrderFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficiencyEstimate {
    pub value: Target,
    pub delta: f64,
    /// `(r, m(r, 1/(f−a)) / T(r, f))` at the radii used.
    pub ratios: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorelEstimate {
    pub value: Target,
    pub lambda: f64,
    pub order: f64,
    pub exceptional: bool,
    /// `(r, n(r))` over the fit range.
    pub counts: Vec<(f64, usize)>,
    /// No `a`-points were found at any radius.
    pub no_zeros: bool,
}

impl BorelEstimate {
    pub fn verdict(&self) -> &'static str {
        if self.exceptional {
            "Borel-exceptional candidate"
        } else {
            "not exceptional"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NevanlinnaReport {
    pub radii: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub t: Vec<f64>,
    pub order: Option<OrderEstimate>,
    /// Radii at which `T` dropped by more than 5% from the previous radius.
    pub monotonicity_violations: Vec<f64>,
    pub deficiency: Option<DeficiencyEstimate>,
    pub lambda: Option<BorelEstimate>,
}

impl NevanlinnaReport {
    pub fn to_json(&self) -> Value {
        let nums = |v: &[f64]| Value::Array(v.iter().map(|x| json_num(*x)).collect());
        let order = self.order.as_ref();
        json!({
            "radii": nums(&self.radii),
            "m": nums(&self.m),
            "N": nums(&self.n),
            "T": nums(&self.t),
            "order": order.map_or(Value::Null, |o| json_num(o.order)),
            "hyper_order": order.and_then(|o| o.hyper_order).map_or(Value::Null, json_num),
            "order_flags": order.map_or(json!([]), |o| json!(o.flags)),
            "monotonicity_violations": nums(&self.monotonicity_violations),
            "deficiency": self.deficiency.as_ref().map_or(json!({}), |d| json!({
                "value": d.value.to_string(),
                "delta": json_num(d.delta),
                "ratios": d.ratios.iter().map(|(r, q)| json!([json_num(*r), json_num(*q)])).collect::<Vec<_>>(),
            })),
            "lambda": self.lambda.as_ref().map_or(json!({}), |b| json!({
                "value": b.value.to_string(),
                "lambda": json_num(b.lambda),
                "order": json_num(b.order),
                "exceptional": b.exceptional,
                "verdict": b.verdict(),
                "no_zeros": b.no_zeros,
                "counts": b.counts.iter().map(|(r, n)| json!([json_num(*r), n])).collect::<Vec<_>>(),
            })),
        })
    }

    /// One row per radius: `r,m,N,T`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,m,N,T\n");
        for k in 0..self.radii.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_g(self.radii[k], 12),
                fmt_g(self.m[k], 12),
                fmt_g(self.n[k], 12),
                fmt_g(self.t[k], 12)
            ));
        }
        out
    }
}

/// Numbers rounded to 12 significant digits so that JSON output is stable.
fn json_num(x: f64) -> Value {
    fmt_g(x, 12).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

/// `(m, N, T)` at each radius; poles are located once at the largest radius.
fn rows(f: &Expr, radii: &[f64], nodes: usize) -> Result<Vec<(f64, f64, f64)>> {
    let rmax = radii.iter().cloned().fold(0.0, f64::max);
    let pole_list = poles(f, rmax)?;
    radii
        .iter()
        .map(|&r| {
            let m = proximity(f, r, nodes)?;
            let n = counting_from(&pole_list, r);
            Ok((m, n, m + n))
        })
        .collect()
}

/// `m`, `N`, `T` over the grid together with the fitted order.
pub fn characteristic(f: &Expr, grid: &RadialGrid) -> Result<NevanlinnaReport> {
    let rows = rows(f, grid.radii(), grid.nodes())?;
    let t: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let monotonicity_violations = grid
        .radii()
        .iter()
        .zip(t.windows(2))
        .filter(|(_, w)| w[1] < 0.95 * w[0])
        .map(|(r, _)| *r)
        .collect::<Vec<_>>();
    let mut report = NevanlinnaReport {
        radii: grid.radii().to_vec(),
        m: rows.iter().map(|r| r.0).collect(),
        n: rows.iter().map(|r| r.1).collect(),
        t,
        order: None,
        monotonicity_violations,
        deficiency: None,
        lambda: None,
    };
    report.order = Some(estimate_order(&report)?);
    Ok(report)
}

/// Least-squares slope and intercept of `y` against `x`, plus the RMS residual.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

/// Order `σ̂` and hyper-order `σ̂₂` from the upper half of a report.
///
/// A characteristic that is affine in `log r` to within 0.2% is classified
/// as logarithmic growth (order 0): over a factor of a few in `r` the
/// power-law slope of `d·log r` is `1/log r`, not 0.
pub fn estimate_order(report: &NevanlinnaReport) -> Result<OrderEstimate> {
    let k = report.radii.len();
    if k < MIN_GRID_RADII {
        return Err(Error::invalid(format!("order fit needs at least {MIN_GRID_RADII} radii")));
    }
    let lo = k / 2;
    let lr: Vec<f64> = report.radii[lo..].iter().map(|r| r.ln()).collect();
    let t = &report.t[lo..];
    let mut flags = Vec::new();
    let tmax = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tmin = t.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(tmin > 0.0) || (tmax - tmin) <= 1e-9 * tmax.abs().max(1e-300) {
        flags.push(OrderFlag::Degenerate);
        return Ok(OrderEstimate { order: 0.0, hyper_order: Some(0.0), raw_slope: 0.0, flags });
    }
    let lt: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let (slope, _, _) = fit_line(&lr, &lt);
    let (alpha, _, rms) = fit_line(&lr, t);
    let mean_t = t.iter().sum::<f64>() / t.len() as f64;
    if alpha > 0.0 && slope < 0.5 && rms <= 2e-3 * mean_t {
        flags.push(OrderFlag::LogarithmicGrowth);
        return Ok(OrderEstimate { order: 0.0, hyper_order: Some(0.0), raw_slope: slope, flags });
    }
    if slope > 5.0 {
        flags.push(OrderFlag::ExceedsFive);
    }
    let hyper_order = if t.iter().all(|v| *v > 1.0) {
        let llt: Vec<f64> = lt.iter().map(|v| v.ln()).collect();
        Some(fit_line(&lr, &llt).0)
    } else {
        flags.push(OrderFlag::HyperOrderUnavailable);
        None
    };
    Ok(OrderEstimate { order: slope, hyper_order, raw_slope: slope, flags })
}

/// `δ̂(a; f)`: median of `m(r, 1/(f−a)) / T(r, f)` over the top three radii.
pub fn deficiency(f: &Expr, a: Target, grid: &RadialGrid) -> Result<DeficiencyEstimate> {
    let radii = &grid.radii()[grid.radii().len() - 3..];
    let rows = rows(f, radii, grid.nodes())?;
    let mut ratios = Vec::with_capacity(3);
    for (&r, row) in radii.iter().zip(&rows) {
        if row.2 < 1e-12 {
            return Err(Error::Degenerate(format!("T(r, f) vanishes at r = {r}")));
        }
        ratios.push((r, proximity_to(f, a, r, grid.nodes())? / row.2));
    }
    let mut q: Vec<f64> = ratios.iter().map(|x| x.1).collect();
    q.sort_by(|a, b| a.total_cmp(b));
    Ok(DeficiencyEstimate { value: a, delta: q[1], ratios })
}

/// Exponent of convergence of the `a`-points against the order of `f`.
pub fn borel_estimate(f: &Expr, a: Target, grid: &RadialGrid) -> Result<BorelEstimate> {
    let g = a.preimage_function(f);
    if g.is_const_zero() {
        return Err(Error::Degenerate("f − a vanishes identically".into()));
    }
    let zl = count_zeros(&g, grid.rmax())?;
    let counts: Vec<(f64, usize)> = grid.top_half().iter().map(|&r| (r, zl.count_within(r))).collect();
    let positive: Vec<&(f64, usize)> = counts.iter().filter(|c| c.1 > 0).collect();
    let no_zeros = positive.is_empty();
    let lambda = if positive.len() < 2 {
        0.0
    } else {
        let x: Vec<f64> = positive.iter().map(|c| c.0.ln()).collect();
        let y: Vec<f64> = positive.iter().map(|c| (c.1 as f64).ln()).collect();
        fit_line(&x, &y).0.max(0.0)
    };
    let order = characteristic(f, grid)?.order.map_or(0.0, |o| o.order);
    Ok(BorelEstimate {
        value: a,
        lambda,
        order,
        exceptional: lambda < order - BOREL_MARGIN,
        counts,
        no_zeros,
    })
}

/// `m(r, f^{(k)}(z+η₁) / f(z+η₂))`.
pub fn ratio_proximity(
    f: &Expr,
    eta1: Complex64,
    eta2: Complex64,
    k: usize,
    r: f64,
    nodes: usize,
) -> Result<f64> {
    let num = f.nth_derivative(k).shift(eta1);
    let den = f.shift(eta2);
    if den.is_const_zero() {
        return Err(Error::Degenerate("f vanishes identically".into()));
    }
    proximity(&(num / den), r, nodes)
}
