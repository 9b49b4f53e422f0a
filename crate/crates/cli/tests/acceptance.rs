//! End-to-end acceptance checks. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any criterion fails.

use std::f64::consts::{LN_2, PI, TAU};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde_json::Value;

use lindiff::expr::parse;
use lindiff::nevanlinna::{
    borel_estimate, characteristic, count_zeros, deficiency, degree_law_ratio, estimate_order, proximity,
    ratio_proximity, shift_deviation, shift_ratio_band, RadialGrid, Target, DEFAULT_NODES,
};
use lindiff::operator::{residual, residual_recurrence, ExprRecurrence, LinearDifferenceOperator, ResidualOptions};
use lindiff::rational::{rational_solutions, PolynomialRecurrence, RationalFunction};
use lindiff::sampling::{disk_points, rect_points};
use lindiff::sharing::{shares_value, DEFAULT_PAIR_TOL};
use lindiff::solution::{build_general_solution, AtomKind, AtomPlan, BuildOptions};
use lindiff::{Expr, RatPoly};

// Tolerances, fixed.
const EXACT_RUNTIME: Duration = Duration::from_secs(1);
const EIGEN_REL_TOL: f64 = 1e-10;
const SOLUTION_TOL: f64 = 1e-9;
const GAMMA_REL_TOL: f64 = 1e-8;
const PROXIMITY_TOL: f64 = 0.01;
const ORDER_TOL_EXP: f64 = 0.1;
const ORDER_TOL_EXP_SQ: f64 = 0.15;
const ORDER_TOL_RATIONAL: f64 = 0.1;
const LOG_LAW_TOL: f64 = 0.10;
const NEVANLINNA_RUNTIME: Duration = Duration::from_secs(30);
const DEFICIENT_MIN: f64 = 0.9;
const NON_DEFICIENT_MAX: f64 = 0.1;
const DEGREE_LAW_TOL: f64 = 0.10;
const SHIFT_TOL: f64 = 0.10;
const BAND_EXACT_TOL: f64 = 1e-9;
const RATIO_PROXIMITY_MAX: f64 = 0.05;
const DISCREPANCY_MIN: f64 = 0.1;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ex(text: &str) -> Expr {
    parse(text).unwrap_or_else(|e| panic!("`{text}`: {e}"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lindiff"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn rp(text: &str) -> RatPoly {
    RatPoly::parse(text).expect("polynomial")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rec = PolynomialRecurrence::new(vec![rp("z^2 - 1"), rp("(z+2)^2"), rp("z + 3")], rp("2*z^2 + 3*z + 4"))
        .map_err(err)?;
    let set = rational_solutions(&rec).map_err(err)?;
    let elapsed = start.elapsed();
    let expected = RationalFunction::new(rp("z"), rp("z + 1")).map_err(err)?;
    let got = set.particular.clone().ok_or("no particular solution")?;
    ensure(got == expected, format!("got {got}"))?;
    let cert = rec.certificate(&got);
    ensure(cert.is_zero(), "certificate difference is not the zero polynomial")?;
    ensure(elapsed < EXACT_RUNTIME, format!("took {elapsed:?}"))?;

    let (code, json) = cli(&["rational", "--file", &data("ex52.json")]);
    ensure(code == 0, format!("CLI exit {code}"))?;
    ensure(json["particular"]["expr"] == "(z)/(z+1)", "CLI printed a different solution")?;
    ensure(json["particular"]["certificate"]["difference"] == "0", "CLI certificate not zero")?;
    Ok(format!("f = {got}, certificate 0, {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let omega = Complex64::from_polar(1.0, TAU / 3.0);
    let op = LinearDifferenceOperator::delta_n(omega, 1).map_err(err)?;
    // exp(z ln5/ω) exp(2πiz/ω) = exp(κ z) with κ = (ln 5 + 2πi)/ω.
    let kappa = (c(5f64.ln(), TAU)) / omega;
    let f = (Expr::constant(kappa) * Expr::var()).exp();
    let opts = ResidualOptions::with_samples(disk_points(100, 5.0));
    let r1 = residual(&op, &f, c(4.0, 0.0), &opts).map_err(err)?;
    ensure(r1.evaluated() == 100, "samples skipped")?;
    ensure(r1.max_rel < EIGEN_REL_TOL, format!("ω pair: {:e}", r1.max_rel))?;

    let pp = PI.powf(PI);
    let op_i = LinearDifferenceOperator::delta_n(c(0.0, 1.0), 1).map_err(err)?;
    let mut worst = r1.max_rel;
    for trig in ["sin", "cos"] {
        let f = ex(&format!("(pi^pi)^(z/i) * {trig}((2*pi/i)*z)"));
        let r = residual(&op_i, &f, c(pp - 1.0, 0.0), &opts).map_err(err)?;
        ensure(r.max_rel < EIGEN_REL_TOL, format!("π^π {trig}: {:e}", r.max_rel))?;
        worst = worst.max(r.max_rel);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < EXACT_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("max relative residual {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for shift in [c(1.0, 0.0), c(0.7, 0.4)] {
        let op = LinearDifferenceOperator::delta_n(shift, 1).map_err(err)?;
        for atom in ["1", "exp:1", "ratq:1;-1,1"] {
            let opts = BuildOptions { plan: AtomPlan::Uniform(AtomKind::parse(atom).map_err(err)?), ..Default::default() };
            let gs = build_general_solution(&op, c(1.0, 0.0), &opts).map_err(err)?;
            ensure(gs.terms.len() == 1, format!("{} terms", gs.terms.len()))?;
            let t = &gs.terms[0];
            ensure((t.root - c(2.0, 0.0)).norm() < 1e-12 && t.power == 0, "expected the single term 2^{z/c}")?;
            ensure((t.exponent_rate() - c(LN_2, 0.0) / shift).norm() < 1e-12, "exponent is not ln 2 / c")?;
            let f = gs.to_expr();
            let rep = residual(&op, &f, c(1.0, 0.0), &ResidualOptions::with_samples(disk_points(100, 5.0)))
                .map_err(err)?;
            ensure(rep.evaluated() > 50, "too many samples skipped")?;
            ensure(rep.max_rel < SOLUTION_TOL, format!("atom {atom}, c = {shift}: {:e}", rep.max_rel))?;
            worst = worst.max(rep.max_rel);
        }
    }
    Ok(format!("2^(z/c)·π(z) for 3 atoms × 2 shifts, max residual {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let shift = c(0.5, 0.25);
    let op = LinearDifferenceOperator::new(shift, vec![c(4.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)]).map_err(err)?;
    let gs = build_general_solution(&op, Complex64::default(), &BuildOptions { generic: true, ..Default::default() })
        .map_err(err)?;
    let mut powers: Vec<usize> = gs.terms.iter().map(|t| t.power).collect();
    powers.sort_unstable();
    ensure(powers == [0, 1], format!("powers {powers:?}"))?;
    let opts = ResidualOptions::with_samples(disk_points(100, 5.0));
    let mut worst = 0.0f64;
    for t in &gs.terms {
        ensure((t.root - c(2.0, 0.0)).norm() < 1e-9, "root is not 2")?;
        let rep = residual(&op, &t.to_expr(), Complex64::default(), &opts).map_err(err)?;
        ensure(rep.headline() < SOLUTION_TOL, format!("z^{} term: {:e}", t.power, rep.headline()))?;
        worst = worst.max(rep.headline());
    }

    let d2 = LinearDifferenceOperator::delta_n(shift, 2).map_err(err)?;
    let gs = build_general_solution(&d2, c(1.0, 0.0), &BuildOptions::default()).map_err(err)?;
    let mut found: Vec<f64> = gs.roots.roots.iter().map(|(r, _)| r.norm()).collect();
    found.sort_by(f64::total_cmp);
    ensure(found.len() == 2 && found[0] < 1e-12 && (found[1] - 2.0).abs() < 1e-9, format!("roots {found:?}"))?;
    ensure(gs.terms.iter().all(|t| t.root.norm() > 0.5), "zero root kept")?;
    ensure(!gs.diagnostics.is_empty(), "no diagnostic for the dropped root")?;
    Ok(format!("2^(z/c), z·2^(z/c) residual {worst:.2e}; Δ² roots {{0, 2}}, zero root dropped"))
}

fn criterion_5() -> Outcome {
    let opts = ResidualOptions::with_samples(disk_points(100, 5.0));
    let hom = ExprRecurrence::parse("-(z^2+1); z^2; 1", "0", c(1.0, 0.0)).map_err(err)?;
    let r1 = residual_recurrence(&hom, &ex("tan(pi*z)"), &opts).map_err(err)?;
    ensure(r1.evaluated() > 50, "too many samples skipped")?;
    ensure(r1.headline() < SOLUTION_TOL, format!("tan homogeneous: {:e}", r1.headline()))?;
    // (z+2) + z²(z+1) − (z²+1)z = z² + 2.
    let inh = ExprRecurrence::parse("-(z^2+1); z^2; 1", "z^2 + 2", c(1.0, 0.0)).map_err(err)?;
    let r2 = residual_recurrence(&inh, &ex("tan(pi*z) + z"), &opts).map_err(err)?;
    ensure(r2.headline() < SOLUTION_TOL, format!("tan + z: {:e}", r2.headline()))?;

    let gamma = ex("gamma(z)");
    let samples = rect_points(100, (1.0, 6.0), (-2.0, 2.0));
    let mut rel = 0.0f64;
    for &z in &samples {
        let next = gamma.eval(z + 1.0).value().ok_or("gamma singular")?;
        let here = gamma.eval(z).value().ok_or("gamma singular")?;
        rel = rel.max((next - z * here).norm() / next.norm());
    }
    ensure(rel < GAMMA_REL_TOL, format!("gamma relative residual {rel:e}"))?;
    Ok(format!("tan {:.1e} / {:.1e}, gamma relative {rel:.1e}", r1.headline(), r2.headline()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let m = proximity(&ex("exp(z)"), PI, DEFAULT_NODES).map_err(err)?;
    ensure((m - 1.0).abs() <= PROXIMITY_TOL, format!("m(π, e^z) = {m}"))?;
    let grid = RadialGrid::default();
    let order = |f: &str| -> Result<f64, String> {
        let rep = characteristic(&ex(f), &grid).map_err(err)?;
        Ok(estimate_order(&rep).map_err(err)?.order)
    };
    let o1 = order("exp(z)")?;
    ensure((o1 - 1.0).abs() <= ORDER_TOL_EXP, format!("σ(e^z) = {o1}"))?;
    let o2 = order("exp(z^2)")?;
    ensure((o2 - 2.0).abs() <= ORDER_TOL_EXP_SQ, format!("σ(e^(z²)) = {o2}"))?;
    let mut notes = Vec::new();
    for (f, d) in [("(z^3 + 2)/(z^2 + 1)", 3.0), ("z^2 - 3*z + 1", 2.0), ("1/(z - 1)", 1.0)] {
        let rep = characteristic(&ex(f), &grid).map_err(err)?;
        let o = estimate_order(&rep).map_err(err)?.order;
        ensure(o.abs() <= ORDER_TOL_RATIONAL, format!("σ({f}) = {o}"))?;
        let t = *rep.t.last().ok_or("empty grid")?;
        let law = d * grid.rmax().ln();
        ensure((t - law).abs() <= LOG_LAW_TOL * law, format!("T(200, {f}) = {t}, d log r = {law}"))?;
        notes.push(format!("{:.3}", t / law));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < NEVANLINNA_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!(
        "m(π) = {m:.5}, σ = {o1:.3} / {o2:.3}, rational T/(d log r) = [{}], {:.1} s",
        notes.join(", "),
        elapsed.as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let grid = RadialGrid::geometric(5.0, 100.0, 10, DEFAULT_NODES).map_err(err)?;
    let e = ex("exp(z)");
    let d0 = deficiency(&e, Target::zero(), &grid).map_err(err)?.delta;
    ensure(d0 >= DEFICIENT_MIN, format!("δ(0; e^z) = {d0}"))?;
    let d1 = deficiency(&e, Target::Finite(c(1.0, 0.0)), &grid).map_err(err)?.delta;
    ensure(d1 <= NON_DEFICIENT_MAX, format!("δ(1; e^z) = {d1}"))?;

    let borel_grid = RadialGrid::geometric(5.0, 40.0, 8, DEFAULT_NODES).map_err(err)?;
    let shifted = ex("(2 - i)*exp(z) + 3");
    let b = borel_estimate(&shifted, Target::Finite(c(3.0, 0.0)), &borel_grid).map_err(err)?;
    ensure(b.exceptional, format!("b·e^z + a at a: {}", b.verdict()))?;
    let s = borel_estimate(&ex("sin(z)"), Target::zero(), &borel_grid).map_err(err)?;
    ensure(!s.exceptional, format!("sin z at 0: {} (λ = {})", s.verdict(), s.lambda))?;
    Ok(format!(
        "δ(0) = {d0:.3}, δ(1) = {d1:.3}; b·e^z+a: {}; sin z: {} (λ = {:.2})",
        b.verdict(),
        s.verdict(),
        s.lambda
    ))
}

const ZERO_CORPUS: [(&str, f64); 10] = [
    ("sin(z)", 10.0),
    ("2*sin(z)", 10.0),
    ("sin(z)^2", 10.0),
    ("z^3 - 1", 2.0),
    ("exp(z) + 1", 10.0),
    ("tan(z)", 5.0),
    ("(z - 1)^2*(z + 2)", 3.0),
    ("(z^2 + 1)/(z - 0.5)", 3.0),
    ("cos(z) - z", 6.0),
    ("exp(z)", 5.0),
];

fn criterion_8() -> Outcome {
    let f = ex("sin(z)");
    let v = shares_value(&f, &ex("2*sin(z)"), Target::zero(), 10.0, DEFAULT_PAIR_TOL).map_err(err)?;
    ensure(v.cm && v.pairs.len() == 7, format!("sin/2 sin: cm {} with {} pairs", v.cm, v.pairs.len()))?;
    let w = shares_value(&f, &ex("sin(z)^2"), Target::zero(), 10.0, DEFAULT_PAIR_TOL).map_err(err)?;
    ensure(!w.cm && w.im, format!("sin/sin²: cm {} im {}", w.cm, w.im))?;
    for (text, r) in ZERO_CORPUS {
        let z = count_zeros(&ex(text), r).map_err(err)?;
        ensure(
            z.leaf_winding_sum == z.root_box_winding && z.outer_winding == z.net_count(),
            format!(
                "{text}: leaves {} vs box {}, outer {} vs net {}",
                z.leaf_winding_sum,
                z.root_box_winding,
                z.outer_winding,
                z.net_count()
            ),
        )?;
    }
    Ok(format!("7 CM pairs; sin² IM only; conservation exact on {} functions", ZERO_CORPUS.len()))
}

fn criterion_9() -> Outcome {
    let nodes = 2048;
    let e = ex("exp(z)");
    let mut law = Vec::new();
    for f in ["exp(z)", "exp(z^2)", "sin(z)"] {
        let q = degree_law_ratio(&ex(f), 200.0, nodes).map_err(err)?;
        ensure((q - 2.0).abs() <= DEGREE_LAW_TOL * 2.0, format!("T(f²)/T(f) for {f} = {q}"))?;
        law.push(q);
    }
    let mut shift = 0.0f64;
    for r in [50.0, 100.0, 200.0] {
        let d = shift_deviation(&e, c(1.0, 0.0), r, nodes).map_err(err)?;
        ensure(d <= SHIFT_TOL, format!("shift deviation {d} at r = {r}"))?;
        shift = shift.max(d);
    }
    let band = shift_ratio_band(&e, c(1.0, 0.0), 1.0, 0.1, 200.0, 1024).map_err(err)?;
    ensure(band.holds(), format!("band fails: {} > {}", band.max_excursion, band.bound))?;
    // |e^{z+1} / e^z| = e, so the excursion is exactly Re η = 1.
    ensure((band.max_excursion - 1.0).abs() < BAND_EXACT_TOL, format!("excursion {}", band.max_excursion))?;
    let g = ex("exp(z^2)");
    let m = ratio_proximity(&g, c(1.0, 0.0), Complex64::default(), 0, 200.0, nodes).map_err(err)?;
    let t = lindiff::nevanlinna::characteristic_at(&g, 200.0, nodes).map_err(err)?;
    ensure(m / t < RATIO_PROXIMITY_MAX, format!("m/T = {}", m / t))?;
    Ok(format!(
        "T(f²)/T(f) = {:.3}/{:.3}/{:.3}, shift dev ≤ {shift:.3}, band excursion {:.6}, m/T = {:.4}",
        law[0],
        law[1],
        law[2],
        band.max_excursion,
        m / t
    ))
}

fn criterion_10() -> Outcome {
    let (code, j) = cli(&[
        "residual",
        "--f",
        "exp(z) + 1",
        "--rec",
        "-e; -(e*z^2 + 1); z^2",
        "--rhs",
        "z^2 - (e*z^2 + 1) - e",
    ]);
    ensure(code == 2, format!("e^z + 1: exit {code}"))?;
    let a = j["residual"]["max_scaled"].as_f64().ok_or("no residual in output")?;
    ensure(a > DISCREPANCY_MIN, format!("e^z + 1 scaled residual {a}"))?;

    let (code, j) = cli(&["residual", "--f", "exp(z)", "--rec", "-e; -(e*z^2 + 1); z^2", "--rhs", "0"]);
    ensure(code == 2, format!("e^z: exit {code}"))?;
    let b = j["residual"]["max_scaled"].as_f64().ok_or("no residual in output")?;
    ensure(b > DISCREPANCY_MIN, format!("e^z scaled residual {b}"))?;

    let (code, j) = cli(&["residual", "--f", "exp((z^2 - 1)/2)", "--rec", "exp(z); 1"]);
    ensure(code == 2, format!("exp((z²−1)/2): exit {code}"))?;
    let d = j["residual"]["max_scaled"].as_f64().ok_or("no residual in output")?;
    ensure(d > DISCREPANCY_MIN, format!("exp((z²−1)/2) scaled residual {d}"))?;
    Ok(format!("flagged: e^z+1 {a:.3}, e^z {b:.3}, exp((z²−1)/2) {d:.3} (exit 2 each)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact rational solution z/(z+1) with zero certificate", criterion_1),
        ("eigen-identities Δf = 4f and Δf = (π^π − 1)f", criterion_2),
        ("Class I solution 2^(z/c)·π(z) across atoms", criterion_3),
        ("Class II ladder and dropped zero root", criterion_4),
        ("tan and gamma recurrences", criterion_5),
        ("proximity, order and rational growth", criterion_6),
        ("deficiency and Borel verdicts", criterion_7),
        ("sharing verdicts and winding conservation", criterion_8),
        ("growth-lemma property suite", criterion_9),
        ("discrepancy detection", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
