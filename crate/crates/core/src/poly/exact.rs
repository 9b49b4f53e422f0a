//! Exact algorithms on [`RatPoly`]: integer shifts, resultants, integer roots
//! and text/JSON forms.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Poly;
use crate::error::Result;
use crate::format::{format_rational, parse_rational, rational_to_f64};
use crate::{ComplexPoly, RatPoly, Rational};

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Poly<Rational> {
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `p(z + k)`, exact via binomial expansion.
    pub fn shift_by_integer(&self, k: i64) -> Self {
        self.shift(&rat(k))
    }

    /// Coefficients scaled by the lcm of their denominators and divided by the
    /// gcd of the resulting integers (sign of the leading coefficient kept).
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn to_complex(&self) -> ComplexPoly {
        Poly::new(self.coeffs().iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect())
    }

    /// Coefficient strings, ascending degree (`["-1", "0", "1"]`).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Self> {
        Ok(Poly::new(coeffs.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<_>>()?))
    }

    /// Converts a polynomial expression such as `(z+2)^2 - 3/4*z` into exact
    /// form. Decimal constants convert exactly from their binary value.
    pub fn from_expr(e: &crate::Expr) -> Result<Self> {
        use crate::expr::{BinOp, Func};
        let bad = |msg: &str| crate::Error::Format { text: e.to_string(), msg: msg.to_string() };
        Ok(match e {
            crate::Expr::Var => Poly::x(),
            crate::Expr::Const(c) => {
                if c.im != 0.0 {
                    return Err(bad("complex coefficient in exact polynomial"));
                }
                let q = Rational::from_float(c.re).ok_or_else(|| bad("non-finite constant"))?;
                Poly::constant(q)
            }
            crate::Expr::Unary(Func::Neg, a) => -RatPoly::from_expr(a)?,
            crate::Expr::Unary(..) => return Err(bad("not a polynomial")),
            crate::Expr::Binary(op, a, b) => {
                let pa = RatPoly::from_expr(a)?;
                match op {
                    BinOp::Add => &pa + &RatPoly::from_expr(b)?,
                    BinOp::Sub => &pa - &RatPoly::from_expr(b)?,
                    BinOp::Mul => &pa * &RatPoly::from_expr(b)?,
                    BinOp::Div => {
                        let pb = RatPoly::from_expr(b)?;
                        if pb.degree() != Some(0) {
                            return Err(bad("division by a non-constant"));
                        }
                        pa.scale(&(Rational::one() / pb.coeff(0)))
                    }
                    BinOp::Pow => {
                        let n = b
                            .as_const()
                            .filter(|c| crate::expr::is_nonneg_integer(*c) && c.re <= 1024.0)
                            .ok_or_else(|| bad("exponent must be a non-negative integer"))?;
                        pa.pow(n.re as u32)
                    }
                }
            }
        })
    }

    /// Parses polynomial expression text in `z`.
    pub fn parse(text: &str) -> Result<Self> {
        RatPoly::from_expr(&crate::expr::parse(text)?)
    }
}

/// Compact text: `z^2+2*z+1`, `3/4*z-1`, `0`.
impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            let body = match k {
                0 => format_rational(&abs),
                _ => {
                    let mono = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if abs.is_one() {
                        mono
                    } else {
                        format!("{}*{mono}", format_rational(&abs))
                    }
                }
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, "+{body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Resultant with the Sylvester-determinant sign convention
/// (rows of `p` first), so `Res(p, q) = lc(p)^{deg q} ∏_{p(α)=0} q(α)`.
///
/// Computed by the Euclidean recursion
/// `Res(A, B) = (-1)^{mn} lc(B)^{m-k} Res(B, A mod B)`.
/// Either argument zero gives zero.
pub fn resultant(p: &RatPoly, q: &RatPoly) -> Rational {
    let (Some(mut m), Some(mut n)) = (p.degree(), q.degree()) else {
        return Rational::zero();
    };
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut acc = Rational::one();
    loop {
        if n == 0 {
            return acc * num_traits::pow(b.coeff(0), m);
        }
        let r = a.rem(&b).expect("b nonzero");
        let Some(k) = r.degree() else {
            return Rational::zero();
        };
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.lead().expect("nonzero").clone(), m - k);
        a = b;
        b = r;
        m = n;
        n = k;
    }
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Divisor enumeration limit; beyond it candidates come from numeric roots.
const ENUMERATION_LIMIT: u64 = 2_000_000;

/// All integer zeros of `p`, ascending, each listed once.
///
/// Candidates are divisors of the lowest nonzero coefficient of the
/// integer-scaled polynomial, bounded by the Cauchy root bound; every
/// candidate is confirmed by exact evaluation.
pub fn integer_roots(p: &RatPoly) -> Vec<BigInt> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let ints = p.primitive_integer_coeffs();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        roots.push(BigInt::zero());
    }
    let c = &ints[low..];
    if c.len() < 2 {
        return roots;
    }
    let a0 = c[0].abs();
    let an = c[c.len() - 1].abs();
    let max_ratio = c.iter().map(|x| x.abs()).max().expect("nonempty").div_ceil(&an);
    let bound = max_ratio + BigInt::one();
    let sqrt_a0 = a0.sqrt();
    let limit = if bound < sqrt_a0 { bound.clone() } else { sqrt_a0 };

    let mut candidates: Vec<BigInt> = Vec::new();
    match limit.to_u64().filter(|&l| l <= ENUMERATION_LIMIT) {
        Some(lim) => {
            for d in 1..=lim {
                let d = BigInt::from(d);
                if a0.is_multiple_of(&d) {
                    let partner = &a0 / &d;
                    if partner <= bound {
                        candidates.push(partner);
                    }
                    candidates.push(d);
                }
            }
        }
        None => {
            // enormous coefficients: take rounded real parts of numeric roots
            if let Ok(rs) = super::roots::roots(&p.to_complex(), 1e-6) {
                for (r, _) in rs.roots {
                    if r.im.abs() < 0.5 && r.re.is_finite() {
                        if let Some(n) = num_traits::FromPrimitive::from_f64(r.re.round()) {
                            let n: BigInt = n;
                            candidates.push(n.abs());
                        }
                    }
                }
            }
        }
    }
    for d in candidates {
        for cand in [d.clone(), -d] {
            if !cand.is_zero() && eval_int(c, &cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_integers(c)
    }

    /// Independent oracle: Sylvester determinant by fraction-free Bareiss elimination.
    fn sylvester_det(a: &RatPoly, b: &RatPoly) -> Rational {
        let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut sign = Rational::one();
        let mut prev = Rational::one();
        for k in 0..size {
            if mat[k][k].is_zero() {
                match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    mat[i][j] = (&mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j]) / &prev;
                }
                mat[i][k] = Rational::zero();
            }
            prev = mat[k][k].clone();
        }
        sign * prev
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-1, 1])), Rational::zero());
        // 2x2 Sylvester matrix [[1, 0], [1, -3]]
        assert_eq!(sylvester_det(&p(&[0, 1]), &p(&[-3, 1])), rat(-3));
        assert_eq!(resultant(&p(&[0, 1]), &p(&[-3, 1])), rat(-3));
        assert_eq!(sylvester_det(&p(&[-1, 0, 1]), &p(&[0, 1])), rat(-1));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[0, 1])), rat(-1));
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let cases = [
            (p(&[3, -1, 4, 1]), p(&[-5, 9, 2])),
            (p(&[1, 2, 3, 4, 5]), p(&[7, 0, -1])),
            (p(&[2, -3, 1]), p(&[-2, 1])),
            (p(&[6]), p(&[1, 1, 1])),
            (p(&[1, 1, 0, 2]), p(&[0, 0, 3, 1])),
        ];
        for (a, b) in cases {
            assert_eq!(resultant(&a, &b), sylvester_det(&a, &b), "{a} / {b}");
        }
    }

    #[test]
    fn integer_root_examples() {
        let ints = |v: Vec<BigInt>| v.into_iter().map(|b| b.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(integer_roots(&p(&[6, -5, 1]))), vec![2, 3]);
        assert!(integer_roots(&p(&[1, 0, 1])).is_empty());
        assert!(integer_roots(&p(&[-3, 2])).is_empty());
        assert_eq!(ints(integer_roots(&p(&[0, 0, -4, 0, 1]))), vec![-2, 0, 2]);
        assert_eq!(ints(integer_roots(&p(&[-1000003, 1]))), vec![1000003]);
        let half = RatPoly::new(vec![Rational::new((-7).into(), 2.into()), Rational::new(1.into(), 2.into())]);
        assert_eq!(ints(integer_roots(&half)), vec![7]);
    }

    #[test]
    fn shift_by_integer_example() {
        assert_eq!(p(&[0, 0, 1]).shift_by_integer(1), p(&[1, 2, 1]));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(p(&[1, 2, 1]).to_string(), "z^2+2*z+1");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "z^2-1");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        let q = RatPoly::new(vec![rat(-1), Rational::new(3.into(), 4.into())]);
        assert_eq!(q.to_string(), "3/4*z-1");
        assert_eq!(RatPoly::parse(&q.to_string()).unwrap(), q);
        assert_eq!(RatPoly::parse("(z+2)^2").unwrap(), p(&[4, 4, 1]));
        assert!(RatPoly::parse("exp(z)").is_err());
        assert_eq!(RatPoly::from_strings(&["3/4", "-1"]).unwrap().to_strings(), vec!["3/4", "-1"]);
    }
}
