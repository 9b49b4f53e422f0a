//! General solutions `f(z) = Σ z^m ρ^{z/c} π(z)` of `L f = A f`, where `ρ`
//! runs over the nonzero characteristic roots, `m` below the root's
//! multiplicity and `π` over period-`c` functions.
//!
//! `ρ^{z/c}` is always the principal branch `exp((z/c) Log ρ)`; a term may
//! carry an extra branch index `k`, which multiplies it by the period-`c`
//! factor `exp(2πikz/c)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::format::{format_complex, parse_complex};
use crate::operator::{residual, LinearDifferenceOperator, ResidualOptions, ResidualReport};
use crate::poly::roots::{roots, RootSet, DEFAULT_CLUSTER_TOL};
use crate::sampling::disk_points;
use crate::{ComplexPoly, Expr};

const PERIODICITY_SAMPLES: usize = 50;
const PERIODICITY_TOL: f64 = 1e-10;

fn i_unit() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Building blocks for period-`c` coefficient functions.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomKind {
    Constant(Complex64),
    /// `exp(2πik z / c)`.
    ExpMode(i64),
    /// `sin(2πz/c)`.
    Sin,
    Cos,
    Tan,
    /// `num(q) / den(q)` with `q = exp(2πiz/c)`.
    RationalInQ { num: ComplexPoly, den: ComplexPoly },
    /// Any expression; must pass the periodicity gate.
    Custom(Expr),
}

impl AtomKind {
    /// Parses `1`, `const:2+i`, `exp:k`, `sin`, `cos`, `tan`,
    /// `ratq:n0,n1,...;d0,d1,...` (ascending coefficients in `q`) or
    /// `custom:<expression>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = |msg: &str| Error::Format { text: t.to_string(), msg: msg.to_string() };
        let (head, rest) = t.split_once(':').unwrap_or((t, ""));
        Ok(match head {
            "sin" => AtomKind::Sin,
            "cos" => AtomKind::Cos,
            "tan" => AtomKind::Tan,
            "const" => AtomKind::Constant(parse_complex(rest)?),
            "exp" => AtomKind::ExpMode(rest.trim().parse().map_err(|_| bad("expected an integer mode"))?),
            "ratq" => {
                let (n, d) = rest.split_once(';').ok_or_else(|| bad("expected `num;den`"))?;
                let list = |s: &str| -> Result<ComplexPoly> {
                    Ok(ComplexPoly::new(s.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?))
                };
                AtomKind::RationalInQ { num: list(n)?, den: list(d)? }
            }
            "custom" => AtomKind::Custom(crate::expr::parse(rest)?),
            _ if rest.is_empty() => AtomKind::Constant(parse_complex(t)?),
            _ => return Err(bad("unknown atom kind")),
        })
    }

    fn label(&self) -> String {
        match self {
            AtomKind::Constant(k) => format!("const:{}", format_complex(*k)),
            AtomKind::ExpMode(k) => format!("exp:{k}"),
            AtomKind::Sin => "sin".into(),
            AtomKind::Cos => "cos".into(),
            AtomKind::Tan => "tan".into(),
            AtomKind::RationalInQ { num, den } => {
                let list = |p: &ComplexPoly| p.coeffs().iter().map(|&c| format_complex(c)).collect::<Vec<_>>().join(",");
                format!("ratq:{};{}", list(num), list(den))
            }
            AtomKind::Custom(e) => format!("custom:{e}"),
        }
    }
}

/// A verified period-`c` function.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicAtom {
    kind: AtomKind,
    period: Complex64,
    expr: Expr,
}

/// `exp(2πik z / c)` as a tree (`1` for `k = 0`).
fn q_power(k: i64, period: Complex64) -> Expr {
    if k == 0 {
        return Expr::one();
    }
    (Expr::constant(i_unit() * TAU * k as f64 / period) * Expr::var()).exp()
}

fn poly_in_q(p: &ComplexPoly, period: Complex64) -> Expr {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(k, &c)| {
            let qk = q_power(k as i64, period);
            if c == Complex64::new(1.0, 0.0) {
                qk
            } else if k == 0 {
                Expr::constant(c)
            } else {
                Expr::constant(c) * qk
            }
        })
        .reduce(|a, b| a + b)
        .unwrap_or_else(Expr::zero)
}

impl PeriodicAtom {
    /// Builds the atom and checks `π(z + c) = π(z)` at 50 points (relative
    /// tolerance 1e-10, points near singularities skipped).
    pub fn new(kind: AtomKind, period: Complex64) -> Result<Self> {
        if period == Complex64::new(0.0, 0.0) || !period.is_finite() {
            return Err(Error::invalid("period must be nonzero and finite"));
        }
        let arg = Expr::constant(Complex64::new(TAU, 0.0) / period) * Expr::var();
        let expr = match &kind {
            AtomKind::Constant(k) => Expr::constant(*k),
            AtomKind::ExpMode(k) => q_power(*k, period),
            AtomKind::Sin => arg.sin(),
            AtomKind::Cos => arg.cos(),
            AtomKind::Tan => arg.tan(),
            AtomKind::RationalInQ { num, den } => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let n = poly_in_q(num, period);
                let d = poly_in_q(den, period);
                if d.is_const_one() {
                    n
                } else {
                    n.checked_div(d)?
                }
            }
            AtomKind::Custom(e) => e.clone(),
        };
        let atom = PeriodicAtom { kind, period, expr };
        atom.check_periodic()?;
        Ok(atom)
    }

    pub fn one(period: Complex64) -> Self {
        PeriodicAtom::new(AtomKind::Constant(Complex64::new(1.0, 0.0)), period).expect("constants are periodic")
    }

    fn check_periodic(&self) -> Result<()> {
        let scale = self.period.norm().max(1.0);
        let mut checked = 0;
        for z in disk_points(PERIODICITY_SAMPLES, 2.0 * scale) {
            let zc = z + self.period;
            if self.expr.singularity_margin(z) < 1e-3 || self.expr.singularity_margin(zc) < 1e-3 {
                continue;
            }
            let (Some(a), Some(b)) = (self.expr.eval(z).value(), self.expr.eval(zc).value()) else {
                continue;
            };
            checked += 1;
            if (a - b).norm() > PERIODICITY_TOL * a.norm().max(b.norm()).max(1e-300) && a != b {
                return Err(Error::NotPeriodic(format!(
                    "{} differs from its shift by {} at z = {}",
                    self.expr,
                    format_complex(self.period),
                    format_complex(z)
                )));
            }
        }
        if checked == 0 {
            return Err(Error::NotPeriodic(format!("{} could not be evaluated at any check point", self.expr)));
        }
        Ok(())
    }

    pub fn kind(&self) -> &AtomKind {
        &self.kind
    }

    pub fn period(&self) -> Complex64 {
        self.period
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn is_zero(&self) -> bool {
        self.expr.is_const_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "kind": self.kind.label(), "expr": self.expr.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTerm {
    pub root: Complex64,
    /// Power `m` of the `z^m` factor.
    pub power: usize,
    pub atom: PeriodicAtom,
    /// Extra branch index `k`: `Log ρ` is replaced by `Log ρ + 2πik`.
    pub log_branch: i64,
}

impl SolutionTerm {
    /// `(Log ρ + 2πik) / c`.
    pub fn exponent_rate(&self) -> Complex64 {
        (self.root.ln() + i_unit() * TAU * self.log_branch as f64) / self.atom.period
    }

    pub fn to_expr(&self) -> Expr {
        if self.atom.is_zero() {
            return Expr::zero();
        }
        let mut rate = self.exponent_rate();
        let mut atom = Some(self.atom.expr.clone());
        if let AtomKind::ExpMode(k) = self.atom.kind {
            rate += i_unit() * TAU * k as f64 / self.atom.period;
            atom = None;
        } else if self.atom.expr.is_const_one() {
            atom = None;
        }
        let mut e = if rate == Complex64::new(0.0, 0.0) {
            Expr::one()
        } else {
            (Expr::constant(rate) * Expr::var()).exp()
        };
        if let Some(a) = atom {
            e = match a.as_const() {
                Some(_) => a * e,
                None => e * a,
            };
        }
        match self.power {
            0 => {}
            1 => e = Expr::var() * e,
            m => e = Expr::var().powi(m as i32) * e,
        }
        e
    }
}

/// How periodic coefficients are assigned to terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum AtomPlan {
    /// The constant 1 everywhere.
    #[default]
    Default,
    /// The same kind for every term.
    Uniform(AtomKind),
    /// One kind per distinct nonzero root (in sorted root order), shared by
    /// all powers of that root.
    PerRoot(Vec<AtomKind>),
    /// One kind per term, in term order.
    PerTerm(Vec<AtomKind>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub plan: AtomPlan,
    /// Allows `A = 0`.
    pub generic: bool,
    pub cluster_tol: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { plan: AtomPlan::Default, generic: false, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSolution {
    pub terms: Vec<SolutionTerm>,
    pub roots: RootSet,
    pub operator: LinearDifferenceOperator,
    pub eigenvalue: Complex64,
    pub generic_mode: bool,
    /// Whether `Σ a_j = 0` holds for the operator.
    pub coefficient_sum_zero: bool,
    pub diagnostics: Vec<String>,
}

impl GeneralSolution {
    pub const BRANCH: &'static str = "principal";

    /// `Σ z^m exp((z/c) Log ρ) π(z)`.
    pub fn to_expr(&self) -> Expr {
        self.terms
            .iter()
            .map(SolutionTerm::to_expr)
            .filter(|e| !e.is_const_zero())
            .reduce(|a, b| a + b)
            .unwrap_or_else(Expr::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "eigenvalue": format_complex(self.eigenvalue),
            "branch": Self::BRANCH,
            "generic_mode": self.generic_mode,
            "coefficient_sum_zero": self.coefficient_sum_zero,
            "operator": self.operator.to_json(),
            "roots": self.roots.roots.iter().map(|(r, m)| serde_json::json!({
                "root": format_complex(*r),
                "multiplicity": m,
            })).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "root": format_complex(t.root),
                "mult_index": t.power,
                "log_branch": t.log_branch,
                "atom": t.atom.to_json(),
                "expr": t.to_expr().to_string(),
            })).collect::<Vec<_>>(),
            "expr": self.to_expr().to_string(),
            "diagnostics": self.diagnostics,
        })
    }
}

/// Solves `L f = A f` structurally: finds the characteristic roots and emits
/// one term per nonzero root and power below its multiplicity.
pub fn build_general_solution(
    op: &LinearDifferenceOperator,
    eigenvalue: Complex64,
    opts: &BuildOptions,
) -> Result<GeneralSolution> {
    let mut diagnostics = Vec::new();
    if eigenvalue == Complex64::new(0.0, 0.0) {
        if !opts.generic {
            return Err(Error::invalid("A = 0 is only accepted in generic solver mode"));
        }
        diagnostics.push("generic solver mode: A = 0 lies outside the classification, which assumes A != 0".into());
    }
    let p = op.characteristic_poly(eigenvalue);
    let rs = roots(&p, opts.cluster_tol)?;
    diagnostics.extend(rs.warnings.iter().cloned());

    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let zero_tol = 1e-14 * scale.max(1.0);
    let mut slots: Vec<(Complex64, usize, usize)> = Vec::new();
    let mut root_index = 0;
    for &(rho, mult) in &rs.roots {
        if rho.norm() <= zero_tol {
            diagnostics.push(format!(
                "root 0 of multiplicity {mult} dropped: 0^(z/c) is undefined, so it contributes no term"
            ));
            continue;
        }
        for m in 0..mult {
            slots.push((rho, m, root_index));
        }
        root_index += 1;
    }
    if slots.is_empty() {
        return Err(Error::AllRootsZero);
    }

    let period = op.shift();
    let kind_for = |t: usize, r: usize| -> Result<AtomKind> {
        Ok(match &opts.plan {
            AtomPlan::Default => AtomKind::Constant(Complex64::new(1.0, 0.0)),
            AtomPlan::Uniform(k) => k.clone(),
            AtomPlan::PerRoot(ks) => ks
                .get(r)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("atom plan has {} entries for {root_index} roots", ks.len())))?,
            AtomPlan::PerTerm(ks) => ks
                .get(t)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("atom plan has {} entries for {} terms", ks.len(), slots.len())))?,
        })
    };
    let mut terms = Vec::with_capacity(slots.len());
    for (t, &(root, power, r)) in slots.iter().enumerate() {
        let atom = PeriodicAtom::new(kind_for(t, r)?, period)?;
        terms.push(SolutionTerm { root, power, atom, log_branch: 0 });
    }
    Ok(GeneralSolution {
        terms,
        roots: rs,
        operator: op.clone(),
        eigenvalue,
        generic_mode: opts.generic,
        coefficient_sum_zero: op.coefficient_sum() == Complex64::new(0.0, 0.0),
        diagnostics,
    })
}

/// Residual of the assembled solution against its own operator and `A`.
pub fn verify_general_solution(gs: &GeneralSolution, opts: &ResidualOptions) -> Result<ResidualReport> {
    residual(&gs.operator, &gs.to_expr(), gs.eigenvalue, opts)
}

/// Classification of `a2 w² + a1 w + (a0 - B) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticCase {
    Distinct,
    /// Discriminant exactly zero.
    Double,
    /// Discriminant zero to within rounding; the two computed roots are
    /// reported but should not be trusted as distinct.
    NearDegenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRoots {
    pub case: QuadraticCase,
    /// `(root, multiplicity)`; for distinct roots `R₁ = (-a1 + √D)/(2a2)` first.
    pub roots: Vec<(Complex64, usize)>,
    pub discriminant: Complex64,
}

/// Roots of the quadratic characteristic equation `a2 w² + a1 w + a0 = B`.
pub fn quadratic_roots(a2: Complex64, a1: Complex64, a0: Complex64, b: Complex64) -> Result<QuadraticRoots> {
    if a2 == Complex64::new(0.0, 0.0) {
        return Err(Error::invalid("a2 must be nonzero"));
    }
    let c0 = a0 - b;
    // a1² + 4 a2 B - 4 a2 a0
    let disc = a1 * a1 - 4.0 * a2 * c0;
    if disc == Complex64::new(0.0, 0.0) {
        return Ok(QuadraticRoots {
            case: QuadraticCase::Double,
            roots: vec![(-a1 / (2.0 * a2), 2)],
            discriminant: disc,
        });
    }
    let s = disc.sqrt();
    let (r1, r2) = if (-a1 * s.conj()).re >= 0.0 {
        let r1 = (-a1 + s) / (2.0 * a2);
        (r1, if r1 == Complex64::new(0.0, 0.0) { -a1 / a2 } else { c0 / (a2 * r1) })
    } else {
        let r2 = (-a1 - s) / (2.0 * a2);
        (if r2 == Complex64::new(0.0, 0.0) { -a1 / a2 } else { c0 / (a2 * r2) }, r2)
    };
    let size = (a1 * a1).norm() + 4.0 * (a2 * c0).norm();
    let case = if disc.norm() <= 1e-12 * size { QuadraticCase::NearDegenerate } else { QuadraticCase::Distinct };
    Ok(QuadraticRoots { case, roots: vec![(r1, 1), (r2, 1)], discriminant: disc })
}

/// `exp(z ln 2 / c) · g(z)` for a period-`c` atom: the family solving
/// `Δ_c^n f = f` for every `n`.
pub fn doubling_solution(atom: &PeriodicAtom) -> Expr {
    SolutionTerm { root: Complex64::new(2.0, 0.0), power: 0, atom: atom.clone(), log_branch: 0 }.to_expr()
}
