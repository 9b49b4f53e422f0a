use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use lindiff::poly::exact::{integer_roots, resultant};
use lindiff::poly::roots::{find_roots, roots, DEFAULT_CLUSTER_TOL};
use lindiff::poly::Poly;
use lindiff::{ComplexPoly, RatPoly, Rational};

fn q(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

fn ipoly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-5i64..=5, 1..=max_deg + 1).prop_map(|c| RatPoly::from_integers(&c))
}

fn nonconstant(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    ipoly(max_deg).prop_filter("degree >= 1", |p| p.degree().unwrap_or(0) >= 1)
}

/// Sylvester determinant by fraction-exact elimination.
fn sylvester_resultant(p: &RatPoly, r: &RatPoly) -> Rational {
    let (m, n) = (p.degree().unwrap(), r.degree().unwrap());
    let size = m + n;
    let mut a = vec![vec![Rational::zero(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            a[i][i + k] = p.coeff(m - k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            a[n + i][i + k] = r.coeff(n - k);
        }
    }
    let mut det = Rational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&row| !a[row][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for row in col + 1..size {
            let factor = a[row][col].clone() / a[col][col].clone();
            for k in col..size {
                let t = factor.clone() * a[col][k].clone();
                a[row][k] -= t;
            }
        }
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in ipoly(4), b in ipoly(4), c in ipoly(4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &RatPoly::one(), a);
    }

    #[test]
    fn shift_is_a_ring_homomorphism(a in ipoly(4), b in ipoly(4), k in -4i64..=4) {
        prop_assert_eq!((&a * &b).shift_by_integer(k), &a.shift_by_integer(k) * &b.shift_by_integer(k));
        prop_assert_eq!((&a + &b).shift_by_integer(k), &a.shift_by_integer(k) + &b.shift_by_integer(k));
        let x = q(3);
        prop_assert_eq!(a.shift_by_integer(k).eval(&x), a.eval(&(x + q(k))));
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in ipoly(5), b in ipoly(5), s in -3i64..=3) {
        let s = RatPoly::constant(q(s));
        prop_assert_eq!((&(&s * &a) + &b).derivative(), &(&s * &a.derivative()) + &b.derivative());
        prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
    }

    #[test]
    fn division_identity(a in ipoly(6), b in nonconstant(3)) {
        let (quo, rem) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.degree_or_neg() < b.degree_or_neg());
    }

    #[test]
    fn resultant_vanishes_exactly_with_a_common_factor(
        a in nonconstant(3),
        b in nonconstant(3),
        common in prop::option::of(-4i64..=4),
    ) {
        let (a, b) = match common {
            Some(r) => {
                let f = RatPoly::from_integers(&[-r, 1]);
                (&a * &f, &b * &f)
            }
            None => (a, b),
        };
        let res = resultant(&a, &b);
        prop_assert_eq!(res.is_zero(), a.gcd(&b).degree().unwrap_or(0) > 0);
        prop_assert_eq!(res, sylvester_resultant(&a, &b));
    }

    #[test]
    fn gcd_divides_and_is_monic(a in nonconstant(4), b in nonconstant(4)) {
        let g = a.gcd(&b);
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assert_eq!(g.lead().cloned(), Some(q(1)));
    }

    #[test]
    fn integer_roots_are_recovered(rs in prop::collection::vec(-30i64..=30, 1..5), junk in -3i64..=3) {
        // An irreducible quadratic factor adds no integer roots.
        let mut p = RatPoly::from_integers(&[junk * junk + 1, 0, 1]);
        for &r in &rs {
            p = &p * &RatPoly::from_integers(&[-r, 1]);
        }
        let mut want: Vec<i64> = rs.clone();
        want.sort_unstable();
        want.dedup();
        let got: Vec<i64> = integer_roots(&p).iter().map(|b| i64::try_from(b).unwrap()).collect();
        prop_assert_eq!(got, want);
    }
}

fn separated_roots() -> impl Strategy<Value = Vec<(Complex<f64>, usize)>> {
    // Distinct points of a 0.5-spaced lattice keep clusters apart.
    prop::collection::btree_map((-4i32..=4, -4i32..=4), 1usize..=3, 1..=4).prop_map(|m| {
        m.into_iter().map(|((x, y), k)| (Complex::new(0.5 * x as f64, 0.5 * y as f64), k)).collect()
    })
}

fn from_roots(rs: &[(Complex<f64>, usize)]) -> ComplexPoly {
    let mut p = ComplexPoly::one();
    for &(r, k) in rs {
        for _ in 0..k {
            p = &p * &Poly::linear_root(r);
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_of_products_of_linear_factors(rs in separated_roots()) {
        let p = from_roots(&rs);
        let found = roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert_eq!(found.total_multiplicity(), p.degree().unwrap());
        prop_assert_eq!(found.len(), rs.len());
        for &(r, k) in &rs {
            prop_assert_eq!(found.multiplicity_of(r, 1e-3), k, "root {} in {:?}", r, found.roots);
        }
    }

    #[test]
    fn simple_roots_in_single_precision(rs in prop::collection::btree_set((-3i32..=3, -3i32..=3), 1..=4)) {
        let pts: Vec<(Complex<f64>, usize)> = rs.iter().map(|&(x, y)| (Complex::new(x as f64, y as f64), 1)).collect();
        let p64 = from_roots(&pts);
        let p32: Poly<Complex<f32>> = p64.map(|c| Complex::new(c.re as f32, c.im as f32));
        let found = find_roots(&p32, 1e-3f32);
        prop_assert!(found.converged);
        for &(r, _) in &pts {
            prop_assert_eq!(found.multiplicity_of(Complex::new(r.re as f32, r.im as f32), 1e-2), 1);
        }
    }
}

#[test]
fn roots_come_sorted_by_modulus_then_argument() {
    let p = from_roots(&[(Complex::new(2.0, 0.0), 1), (Complex::new(-1.0, 0.0), 2), (Complex::new(0.0, 1.0), 1)]);
    let found = roots(&p, DEFAULT_CLUSTER_TOL).unwrap();
    let keys: Vec<(f64, f64)> = found.roots.iter().map(|(r, _)| (r.norm(), r.arg())).collect();
    for w in keys.windows(2) {
        assert!(w[0].0 < w[1].0 - 1e-9 || ((w[0].0 - w[1].0).abs() < 1e-9 && w[0].1 <= w[1].1));
    }
}
