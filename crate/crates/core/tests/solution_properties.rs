use num_complex::Complex64;
use proptest::prelude::*;

use lindiff::expr::parse;
use lindiff::operator::{residual, LinearDifferenceOperator, ResidualOptions};
use lindiff::poly::roots::DEFAULT_CLUSTER_TOL;
use lindiff::sampling::disk_points;
use lindiff::solution::{build_general_solution, AtomKind, AtomPlan, BuildOptions};
use lindiff::{ComplexPoly, Expr};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn opts() -> ResidualOptions {
    ResidualOptions::with_samples(disk_points(60, 3.0))
}

fn atom_kind() -> impl Strategy<Value = AtomKind> {
    prop_oneof![
        Just(AtomKind::Constant(c(1.0, 0.0))),
        (-2i64..=2).prop_map(AtomKind::ExpMode),
        Just(AtomKind::Sin),
        Just(AtomKind::Cos),
    ]
}

/// Operator with prescribed characteristic roots (for `A = 0`).
fn op_with_roots(shift: Complex64, roots: &[Complex64]) -> LinearDifferenceOperator {
    let mut p = ComplexPoly::one();
    for &r in roots {
        p = &p * &ComplexPoly::linear_root(r);
    }
    LinearDifferenceOperator::new(shift, p.into_coeffs()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn general_solutions_pass_for_random_roots_and_atoms(
        r1 in 0.5f64..2.0,
        r2 in -2.0f64..-0.5,
        theta in 0.0f64..6.0,
        kinds in prop::collection::vec(atom_kind(), 2),
    ) {
        let shift = Complex64::from_polar(0.8, theta);
        let op = op_with_roots(shift, &[c(r1, 0.3), c(r2, -0.2)]);
        let gs = build_general_solution(
            &op,
            Complex64::default(),
            &BuildOptions { plan: AtomPlan::PerRoot(kinds), generic: true, cluster_tol: DEFAULT_CLUSTER_TOL },
        ).unwrap();
        prop_assert_eq!(gs.terms.len(), 2);
        let rep = residual(&op, &gs.to_expr(), Complex64::default(), &opts()).unwrap();
        prop_assert!(rep.headline() < 1e-9, "{}", rep.headline());
    }

    #[test]
    fn superposition_of_term_solutions(a in -3.0f64..3.0, b in -3.0f64..3.0, k in -2i64..=2) {
        // (w - 2)^2 (w + 1): terms 2^{z/c}, z 2^{z/c}, (-1)^{z/c}.
        let shift = c(1.0, 0.5);
        let op = op_with_roots(shift, &[c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let gs = build_general_solution(
            &op,
            Complex64::default(),
            &BuildOptions { plan: AtomPlan::Uniform(AtomKind::ExpMode(k)), generic: true, cluster_tol: DEFAULT_CLUSTER_TOL },
        ).unwrap();
        prop_assert_eq!(gs.terms.len(), 3);
        let mut f = Expr::zero();
        for (t, w) in gs.terms.iter().zip([a, b, a - b]) {
            f = f + Expr::real(w) * t.to_expr();
        }
        let rep = residual(&op, &f, Complex64::default(), &opts()).unwrap();
        prop_assert!(rep.headline() < 1e-9, "{}", rep.headline());
    }

    #[test]
    fn operator_application_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let op = LinearDifferenceOperator::new(c(0.3, 0.7), vec![c(1.0, 0.0), c(-2.0, 1.0), c(0.5, 0.0)]).unwrap();
        let f = parse("sin(z) + z^2").unwrap();
        let g = parse("exp(z/2)").unwrap();
        let z = c(x, y);
        let lhs = op.apply(&(Expr::real(a) * f.clone() + Expr::real(b) * g.clone())).eval(z).value().unwrap();
        let rhs = a * op.apply(&f).eval(z).value().unwrap() + b * op.apply(&g).eval(z).value().unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }
}

#[test]
fn forward_difference_has_binomial_coefficients() {
    let shift = c(0.5, -0.25);
    for n in 1..=6usize {
        let op = LinearDifferenceOperator::delta_n(shift, n).unwrap();
        let mut binom = 1i64;
        for (j, a) in op.coeffs().iter().enumerate() {
            let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(*a, c(sign * binom as f64, 0.0), "n = {n}, j = {j}");
            binom = binom * (n - j) as i64 / (j as i64 + 1);
        }
    }
}

#[test]
fn delta_n_kills_polynomials_of_lower_degree() {
    let shift = c(0.7, 0.2);
    for n in 1..=5usize {
        let op = LinearDifferenceOperator::delta_n(shift, n).unwrap();
        let f = Expr::var().powi(n as i32 - 1) + Expr::real(3.0);
        let rep = residual(&op, &f, Complex64::default(), &opts()).unwrap();
        assert!(rep.max_abs < 1e-8, "n = {n}: {}", rep.max_abs);
    }
}

#[test]
fn eigen_solutions_hold_on_the_shifted_lattice() {
    // f(z + c) = ρ f(z) for each Class I term; compare along z, z+c, z+2c.
    let shift = c(-0.4, 0.9);
    let op = LinearDifferenceOperator::new(shift, vec![c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap();
    let gs = build_general_solution(&op, Complex64::default(), &BuildOptions { generic: true, ..Default::default() })
        .unwrap();
    for t in &gs.terms {
        let f = t.to_expr();
        for z in disk_points(20, 2.0) {
            let here = f.eval(z).value().unwrap();
            let next = f.eval(z + shift).value().unwrap();
            assert!((next - t.root * here).norm() < 1e-10 * (1.0 + next.norm()));
        }
    }
}
