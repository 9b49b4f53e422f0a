use std::fmt::Write as _;

use clap::Args;
use num_complex::Complex64;
use serde_json::{json, Value};

use lindiff::format::{fmt_g, format_complex, parse_complex, parse_rational};
use lindiff::nevanlinna::{borel_estimate, characteristic, deficiency, RadialGrid, Target};
use lindiff::operator::{
    detect_eigenvalue, residual_mixed, residual_recurrence, ExprRecurrence, LinearDifferenceOperator,
    LinearDifferentialOperator, ResidualOptions, ResidualReport,
};
use lindiff::poly::roots::roots as find_roots;
use lindiff::rational::{rational_solutions, PolynomialRecurrence};
use lindiff::sampling::{disk_points, random_disk_points, rect_points};
use lindiff::sharing::shares_value;
use lindiff::solution::{build_general_solution, verify_general_solution, AtomKind, AtomPlan, BuildOptions};
use lindiff::{ComplexPoly, Error, Expr, RatPoly};

use crate::{GlobalOpts, Status};

pub struct Output {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

#[derive(Debug)]
pub struct CliError {
    msg: String,
    status: Status,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { msg: msg.into(), status: Status::Usage }
    }

    pub fn status(&self) -> Status {
        self.status
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. }
            | Error::UnknownIdentifier { .. }
            | Error::Format { .. }
            | Error::InvalidArgument(_)
            | Error::NotPeriodic(_)
            | Error::DivisionByZero => Status::Usage,
            _ => Status::Failed,
        };
        CliError { msg: e.to_string(), status }
    }
}

type CmdResult = Result<Output, CliError>;

fn parse_expr(text: &str) -> Result<Expr, CliError> {
    Ok(lindiff::expr::parse(text)?)
}

fn complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',').map(|s| parse_complex(s.trim()).map_err(CliError::from)).collect()
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Number of sample points.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    /// Samples fill the disk |z| <= radius.
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,

    /// Samples fill the rectangle `x0,x1,y0,y1` instead of a disk.
    #[arg(long)]
    pub rect: Option<String>,
}

impl SampleArgs {
    fn options(&self, global: &GlobalOpts) -> Result<ResidualOptions, CliError> {
        if self.samples == 0 {
            return Err(CliError::usage("--samples must be positive"));
        }
        let points = match &self.rect {
            Some(r) => {
                let v: Vec<f64> = r
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::usage(format!("bad --rect `{r}`")))?;
                if v.len() != 4 || !(v[0] < v[1] && v[2] < v[3]) {
                    return Err(CliError::usage("--rect needs x0<x1,y0<y1"));
                }
                rect_points(self.samples, (v[0], v[1]), (v[2], v[3]))
            }
            None => {
                if !(self.radius > 0.0) {
                    return Err(CliError::usage("--radius must be positive"));
                }
                match global.seed {
                    Some(seed) => random_disk_points(self.samples, self.radius, seed),
                    None => disk_points(self.samples, self.radius),
                }
            }
        };
        Ok(ResidualOptions::with_samples(points))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    /// Operator shorthand, e.g. `delta:c=1,n=2`.
    #[arg(long)]
    pub op: Option<String>,

    /// JSON operator file `{"shift": .., "coeffs": [..]}`.
    #[arg(long)]
    pub op_file: Option<String>,

    /// Coefficients `a_0,...,a_n` of `Σ a_j f(z + j c)`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    /// Shift `c` used with `--coeffs`.
    #[arg(long, default_value = "1")]
    pub c: String,
}

impl OperatorArgs {
    fn given(&self) -> bool {
        self.op.is_some() || self.op_file.is_some() || self.coeffs.is_some()
    }

    fn build(&self) -> Result<LinearDifferenceOperator, CliError> {
        let count = [self.op.is_some(), self.op_file.is_some(), self.coeffs.is_some()].iter().filter(|b| **b).count();
        if count != 1 {
            return Err(CliError::usage("give exactly one of --op, --op-file, --coeffs"));
        }
        if let Some(text) = &self.op {
            return parse_op(text);
        }
        if let Some(path) = &self.op_file {
            let v = read_json(path)?;
            return Ok(LinearDifferenceOperator::from_json(&v)?);
        }
        let coeffs = complex_list(self.coeffs.as_deref().expect("checked above"))?;
        Ok(LinearDifferenceOperator::new(parse_complex(&self.c)?, coeffs)?)
    }
}

fn parse_op(text: &str) -> Result<LinearDifferenceOperator, CliError> {
    let (kind, params) = text.split_once(':').unwrap_or((text, ""));
    if kind.trim() != "delta" {
        return Err(CliError::usage(format!("unknown operator `{kind}`; expected delta:c=..,n=..")));
    }
    let mut c = Complex64::new(1.0, 0.0);
    let mut n = 1usize;
    for part in params.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("bad operator parameter `{part}`")))?;
        match k.trim() {
            "c" => c = parse_complex(v.trim())?,
            "n" => n = v.trim().parse().map_err(|_| CliError::usage(format!("bad order `{v}`")))?,
            other => return Err(CliError::usage(format!("unknown operator parameter `{other}`"))),
        }
    }
    Ok(LinearDifferenceOperator::delta_n(c, n)?)
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path} is not valid JSON: {e}")))
}

fn residual_text(rep: &ResidualReport, tol: f64) -> String {
    format!(
        "residual ({:?}): {} over {} samples ({} skipped), tol {} -> {}\n",
        rep.measure,
        fmt_g(rep.headline(), 6),
        rep.evaluated(),
        rep.skipped.len(),
        fmt_g(tol, 3),
        if rep.passes(tol) { "pass" } else { "FAIL" }
    )
}

fn status_for(rep: &ResidualReport, tol: f64) -> Status {
    if rep.passes(tol) {
        Status::Ok
    } else {
        Status::Failed
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveEigenArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    /// Eigenvalue `A` in `L f = A f`.
    #[arg(long = "A", short = 'A', allow_hyphen_values = true)]
    pub eigenvalue: String,

    /// Accept `A = 0`.
    #[arg(long)]
    pub generic: bool,

    /// Periodic coefficient kind (`1`, `exp:k`, `sin`, `cos`, `tan`,
    /// `ratq:n..;d..`, `custom:expr`); repeat for one kind per root.
    #[arg(long)]
    pub atom: Vec<String>,

    /// Use the `--atom` list per term rather than per root.
    #[arg(long)]
    pub per_term: bool,

    #[arg(long, default_value_t = lindiff::poly::roots::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,

    #[command(flatten)]
    pub sampling: SampleArgs,
}

pub fn solve_eigen(args: &SolveEigenArgs, global: &GlobalOpts) -> CmdResult {
    let op = args.operator.build()?;
    let a = parse_complex(&args.eigenvalue)?;
    let kinds = args.atom.iter().map(|s| AtomKind::parse(s)).collect::<lindiff::Result<Vec<_>>>()?;
    let plan = match (kinds.len(), args.per_term) {
        (0, _) => AtomPlan::Default,
        (_, true) => AtomPlan::PerTerm(kinds),
        (1, false) => AtomPlan::Uniform(kinds.into_iter().next().expect("one kind")),
        (_, false) => AtomPlan::PerRoot(kinds),
    };
    let opts = BuildOptions { plan, generic: args.generic, cluster_tol: args.cluster_tol };
    let gs = build_general_solution(&op, a, &opts)?;
    let rep = verify_general_solution(&gs, &args.sampling.options(global)?)?;
    let status = status_for(&rep, global.tol);

    let mut text = String::new();
    let _ = writeln!(text, "characteristic roots:");
    for (r, m) in &gs.roots.roots {
        let _ = writeln!(text, "  {}  (multiplicity {m})", format_complex(*r));
    }
    let _ = writeln!(text, "solution: f(z) = {}", gs.to_expr());
    for d in &gs.diagnostics {
        let _ = writeln!(text, "note: {d}");
    }
    text.push_str(&residual_text(&rep, global.tol));
    let json = json!({
        "command": "solve-eigen",
        "solution": gs.to_json(),
        "residual": rep.to_json(),
        "tol": global.tol,
        "verified": status == Status::Ok,
    });
    Ok(Output { json, text, status })
}

#[derive(Debug, Clone, Args)]
pub struct ResidualArgs {
    /// Candidate solution `f(z)`.
    #[arg(long)]
    pub f: String,

    #[command(flatten)]
    pub operator: OperatorArgs,

    /// Eigenvalue `A`; estimated from `f` when omitted.
    #[arg(long = "A", short = 'A', allow_hyphen_values = true)]
    pub eigenvalue: Option<String>,

    /// Differential part `b_1,...,b_k` of a mixed operator.
    #[arg(long, allow_hyphen_values = true)]
    pub diff_coeffs: Option<String>,

    /// Additive constant `b_0` of the differential part.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub b0: String,

    /// Recurrence coefficients `b_0(z); b_1(z); ...` of `Σ b_j f(z + jη) = rhs`.
    #[arg(long, allow_hyphen_values = true)]
    pub rec: Option<String>,

    /// Right side of the recurrence.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub rhs: String,

    /// Step `η` of the recurrence.
    #[arg(long, default_value = "1")]
    pub step: String,

    #[command(flatten)]
    pub sampling: SampleArgs,
}

pub fn residual(args: &ResidualArgs, global: &GlobalOpts) -> CmdResult {
    let f = parse_expr(&args.f)?;
    let opts = args.sampling.options(global)?;
    let (mode, rep, extra) = if let Some(rec) = &args.rec {
        if args.operator.given() {
            return Err(CliError::usage("--rec cannot be combined with a difference operator"));
        }
        let rec = ExprRecurrence::parse(rec, &args.rhs, parse_complex(&args.step)?)?;
        ("recurrence", residual_recurrence(&rec, &f, &opts)?, json!({}))
    } else {
        let op = args.operator.build()?;
        let a = match &args.eigenvalue {
            Some(s) => parse_complex(s)?,
            None => detect_eigenvalue(&op, &f, Complex64::new(0.37, 0.21))?,
        };
        match &args.diff_coeffs {
            Some(dc) => {
                let lop = LinearDifferentialOperator::new(complex_list(dc)?, parse_complex(&args.b0)?)?;
                (
                    "mixed",
                    residual_mixed(&op, &lop, &f, a, &opts)?,
                    json!({"eigenvalue": format_complex(a), "operator": lindiff::operator::mixed_to_json(&op, &lop)}),
                )
            }
            None => (
                "difference",
                lindiff::operator::residual(&op, &f, a, &opts)?,
                json!({"eigenvalue": format_complex(a), "operator": op.to_json()}),
            ),
        }
    };
    let status = status_for(&rep, global.tol);
    let mut text = format!("{mode} residual of f(z) = {f}\n");
    if let Some(a) = extra.get("eigenvalue").and_then(Value::as_str) {
        let _ = writeln!(text, "A = {a}");
    }
    text.push_str(&residual_text(&rep, global.tol));
    let _ = writeln!(
        text,
        "max abs {}  max rel {}  max scaled {}",
        fmt_g(rep.max_abs, 6),
        fmt_g(rep.max_rel, 6),
        fmt_g(rep.max_scaled, 6)
    );
    let mut json = json!({
        "command": "residual",
        "mode": mode,
        "f": f.to_string(),
        "residual": rep.to_json(),
        "headline": rep.headline(),
        "tol": global.tol,
        "verified": status == Status::Ok,
    });
    if let (Some(obj), Value::Object(more)) = (json.as_object_mut(), extra) {
        obj.extend(more);
    }
    Ok(Output { json, text, status })
}

#[derive(Debug, Clone, Args)]
pub struct NevanlinnaArgs {
    #[arg(long)]
    pub f: String,

    #[arg(long, default_value_t = 5.0)]
    pub rmin: f64,

    #[arg(long, default_value_t = 200.0)]
    pub rmax: f64,

    /// Number of radii (geometric spacing).
    #[arg(long, default_value_t = 12)]
    pub radii: usize,

    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = lindiff::nevanlinna::DEFAULT_NODES)]
    pub nodes: usize,

    /// Value for the deficiency and Borel estimates (`inf` for poles).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,

    /// Also write the `r,m,N,T` table to this CSV file.
    #[arg(long)]
    pub csv: Option<String>,
}

pub fn nevanlinna(args: &NevanlinnaArgs, _global: &GlobalOpts) -> CmdResult {
    let f = parse_expr(&args.f)?;
    let grid = RadialGrid::geometric(args.rmin, args.rmax, args.radii, args.nodes)?;
    let mut report = characteristic(&f, &grid)?;
    if let Some(a) = &args.a {
        let a = Target::parse(a)?;
        report.deficiency = Some(deficiency(&f, a, &grid)?);
        report.lambda = Some(borel_estimate(&f, a, &grid)?);
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv()).map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))?;
    }
    let mut text = format!("{:>12} {:>14} {:>14} {:>14}\n", "r", "m(r)", "N(r)", "T(r)");
    for k in 0..report.radii.len() {
        let _ = writeln!(
            text,
            "{:>12} {:>14} {:>14} {:>14}",
            fmt_g(report.radii[k], 6),
            fmt_g(report.m[k], 8),
            fmt_g(report.n[k], 8),
            fmt_g(report.t[k], 8)
        );
    }
    if let Some(o) = &report.order {
        let _ = write!(text, "order ~ {}", fmt_g(o.order, 4));
        if let Some(h) = o.hyper_order {
            let _ = write!(text, ", hyper-order ~ {}", fmt_g(h, 4));
        }
        if !o.flags.is_empty() {
            let _ = write!(text, " {:?}", o.flags);
        }
        text.push('\n');
    }
    if let Some(d) = &report.deficiency {
        let _ = writeln!(text, "deficiency at {}: {}", d.value, fmt_g(d.delta, 4));
    }
    if let Some(b) = &report.lambda {
        let _ = writeln!(
            text,
            "exponent of convergence of {}-points: {} vs order {} -> {}",
            b.value,
            fmt_g(b.lambda, 4),
            fmt_g(b.order, 4),
            b.verdict()
        );
    }
    let mut json = report.to_json();
    json["command"] = json!("nevanlinna");
    json["f"] = json!(f.to_string());
    Ok(Output { json, text, status: Status::Ok })
}

#[derive(Debug, Clone, Args)]
pub struct ShareArgs {
    #[arg(long)]
    pub f: String,

    #[arg(long)]
    pub g: String,

    /// Shared value (`inf` for poles).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub a: String,

    /// Disk radius.
    #[arg(long, default_value_t = 10.0)]
    pub r: f64,

    #[arg(long, default_value_t = lindiff::sharing::DEFAULT_PAIR_TOL)]
    pub pair_tol: f64,
}

pub fn share(args: &ShareArgs, _global: &GlobalOpts) -> CmdResult {
    let f = parse_expr(&args.f)?;
    let g = parse_expr(&args.g)?;
    let v = shares_value(&f, &g, Target::parse(&args.a)?, args.r, args.pair_tol)?;
    let mut json = v.to_json();
    json["command"] = json!("share");
    Ok(Output { json, text: v.to_table(), status: Status::Ok })
}

#[derive(Debug, Clone, Args)]
pub struct RationalArgs {
    /// Recurrence file `{"coeffs": [..], "rhs": .., "step": ".."}`.
    #[arg(long)]
    pub file: Option<String>,

    /// Coefficients `b_0(z); b_1(z); ...` as polynomials.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub rhs: String,

    /// Step `η` (rational).
    #[arg(long, default_value = "1")]
    pub step: String,
}

pub fn rational(args: &RationalArgs, _global: &GlobalOpts) -> CmdResult {
    let rec = match (&args.file, &args.coeffs) {
        (Some(path), None) => PolynomialRecurrence::from_json(&read_json(path)?)?,
        (None, Some(cs)) => {
            let coeffs = cs.split(';').map(|s| RatPoly::parse(s.trim())).collect::<lindiff::Result<Vec<_>>>()?;
            PolynomialRecurrence::with_step(coeffs, RatPoly::parse(&args.rhs)?, parse_rational(&args.step)?)?
        }
        _ => return Err(CliError::usage("give exactly one of --file, --coeffs")),
    };
    let set = rational_solutions(&rec)?;
    let mut text = format!("recurrence: {rec}\n");
    let _ = writeln!(text, "universal denominator: {}", set.universal_denominator);
    let _ = writeln!(text, "degree bound: {}", set.degree_bound);
    match &set.particular {
        Some(f) => {
            let _ = writeln!(text, "particular solution: f(z) = {f}");
            let cert = rec.certificate(f);
            let _ = writeln!(
                text,
                "certificate: cleared by {}, difference {}",
                cert.multiplier, cert.difference
            );
        }
        None => text.push_str("no rational solution\n"),
    }
    if set.basis.is_empty() {
        text.push_str("homogeneous rational solutions: none\n");
    } else {
        text.push_str("homogeneous rational solutions:\n");
        for b in &set.basis {
            let _ = writeln!(text, "  {b}");
        }
    }
    let mut json = set.to_json();
    json["command"] = json!("rational");
    Ok(Output { json, text, status: Status::Ok })
}

#[derive(Debug, Clone, Args)]
pub struct RootsArgs {
    /// Coefficients `p_0,...,p_n`, lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,

    #[arg(long, default_value_t = lindiff::poly::roots::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
}

pub fn roots(args: &RootsArgs, _global: &GlobalOpts) -> CmdResult {
    let p = ComplexPoly::new(complex_list(&args.coeffs)?);
    let rs = find_roots(&p, args.cluster_tol)?;
    let mut text = String::new();
    for (r, m) in &rs.roots {
        let _ = writeln!(text, "{}  (multiplicity {m})", format_complex(*r));
    }
    for w in &rs.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let json = json!({
        "command": "roots",
        "roots": rs.roots.iter().map(|(r, m)| json!({"root": format_complex(*r), "multiplicity": m})).collect::<Vec<_>>(),
        "iterations": rs.iterations,
        "converged": rs.converged,
        "warnings": rs.warnings,
    });
    Ok(Output { json, text, status: Status::Ok })
}
