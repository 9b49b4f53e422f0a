//! Exact rational solutions of linear recurrences with polynomial coefficients,
//! `Σ_j b_j(z) f(z + jη) = b(z)`.
//!
//! Denominators are bounded with Abramov's universal denominator and
//! numerators found by undetermined coefficients up to a degree bound.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::expr::Expr;
use crate::format::{format_rational, parse_rational};
use crate::linalg::{is_zero_vector, solve_affine};
use crate::poly::exact::{integer_roots, resultant};
use crate::{Error, RatPoly, Rational, Result};

/// Degree bounds above this are rejected rather than attempted.
pub const MAX_DEGREE_BOUND: usize = 400;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `Σ_j b_j(z) f(z + j·step) = rhs(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialRecurrence {
    coeffs: Vec<RatPoly>,
    rhs: RatPoly,
    step: Rational,
}

impl PolynomialRecurrence {
    /// Unit-step recurrence; `coeffs[j]` multiplies `f(z + j)`.
    pub fn new(coeffs: Vec<RatPoly>, rhs: RatPoly) -> Result<Self> {
        Self::with_step(coeffs, rhs, Rational::one())
    }

    pub fn with_step(coeffs: Vec<RatPoly>, rhs: RatPoly, step: Rational) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid("a recurrence needs at least b_0 and b_1"));
        }
        if coeffs[0].is_zero() || coeffs.last().expect("nonempty").is_zero() {
            return Err(Error::invalid("b_0 and b_n must be nonzero polynomials"));
        }
        if step.is_zero() {
            return Err(Error::invalid("step must be nonzero"));
        }
        Ok(PolynomialRecurrence { coeffs, rhs, step })
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &RatPoly {
        &self.rhs
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.is_zero()
    }

    pub fn homogeneous(&self) -> Self {
        PolynomialRecurrence { rhs: RatPoly::zero(), ..self.clone() }
    }

    fn shift_of(&self, j: usize) -> Rational {
        &self.step * rat(j as i64)
    }

    /// `Σ b_j p(z + jη)` for a polynomial `p`.
    pub fn apply_poly(&self, p: &RatPoly) -> RatPoly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(RatPoly::zero(), |acc, (j, b)| &acc + &(b * &p.shift(&self.shift_of(j))))
    }

    /// The recurrence with `z = η w`, which has unit step in `w`.
    pub fn normalized(&self) -> Self {
        if self.step.is_one() {
            return self.clone();
        }
        PolynomialRecurrence {
            coeffs: self.coeffs.iter().map(|b| b.scale_arg(&self.step)).collect(),
            rhs: self.rhs.scale_arg(&self.step),
            step: Rational::one(),
        }
    }

    /// Clears denominators in `L(num/den) − rhs`; the result is zero exactly
    /// when `num/den` is a solution.
    pub fn certificate(&self, f: &RationalFunction) -> Certificate {
        let dens: Vec<RatPoly> = (0..=self.order()).map(|j| f.den.shift(&self.shift_of(j))).collect();
        let multiplier = dens.iter().fold(RatPoly::one(), |acc, d| acc.lcm(d));
        let terms: Vec<RatPoly> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let cofactor = multiplier.exact_div(&dens[j]).expect("lcm is divisible");
                &(b * &f.num.shift(&self.shift_of(j))) * &cofactor
            })
            .collect();
        let rhs = &self.rhs * &multiplier;
        let difference = terms.iter().fold(-(&rhs), |acc, t| &acc + t);
        Certificate { multiplier, terms, rhs, difference }
    }

    /// Reads `{"coeffs": [poly, ...], "rhs": poly, "step": "1"}`; a polynomial
    /// is either a string like `"z^2-1"` or an ascending coefficient list.
    pub fn from_json(v: &Value) -> Result<Self> {
        let poly = |p: &Value| -> Result<RatPoly> {
            match p {
                Value::String(s) => RatPoly::parse(s),
                Value::Number(n) => RatPoly::parse(&n.to_string()),
                Value::Array(items) => {
                    let strs: Vec<String> = items
                        .iter()
                        .map(|c| match c {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect();
                    RatPoly::from_strings(&strs)
                }
                _ => Err(Error::Format { text: p.to_string(), msg: "expected a polynomial".into() }),
            }
        };
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("recurrence needs a \"coeffs\" array"))?
            .iter()
            .map(poly)
            .collect::<Result<Vec<_>>>()?;
        let rhs = match v.get("rhs") {
            Some(p) => poly(p)?,
            None => RatPoly::zero(),
        };
        let step = match v.get("step") {
            None | Some(Value::Null) => Rational::one(),
            Some(Value::String(s)) => parse_rational(s)?,
            Some(other) => parse_rational(&other.to_string())?,
        };
        Self::with_step(coeffs, rhs, step)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "rhs": self.rhs.to_string(),
            "step": format_rational(&self.step),
        })
    }

    /// The recurrence as an expression-coefficient recurrence, for numeric checks.
    pub fn to_expr_recurrence(&self) -> crate::operator::ExprRecurrence {
        let step = crate::format::rational_to_f64(&self.step);
        crate::operator::ExprRecurrence::new(
            self.coeffs.iter().map(poly_expr).collect(),
            poly_expr(&self.rhs),
            num_complex::Complex64::new(step, 0.0),
        )
        .expect("coefficients and step are valid")
    }
}

impl fmt::Display for PolynomialRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let step = format_rational(&self.step);
        let mut first = true;
        for (j, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let arg = match j {
                0 => "z".to_string(),
                _ if step == "1" => format!("z+{j}"),
                _ => format!("z+{j}*{step}"),
            };
            write!(f, "({b})*f({arg})")?;
        }
        write!(f, " = {}", self.rhs)
    }
}

fn poly_expr(p: &RatPoly) -> Expr {
    crate::expr::parse(&p.to_string()).expect("polynomial display parses")
}

/// Cleared-denominator identity `Σ terms − rhs = difference`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Common denominator `lcm_j den(z + jη)`.
    pub multiplier: RatPoly,
    pub terms: Vec<RatPoly>,
    pub rhs: RatPoly,
    pub difference: RatPoly,
}

impl Certificate {
    pub fn is_zero(&self) -> bool {
        self.difference.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "multiplier": self.multiplier.to_string(),
            "cleared_terms": self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "cleared_rhs": self.rhs.to_string(),
            "difference": self.difference.to_string(),
        })
    }
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RationalFunction {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree().unwrap_or(0) > 0 {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        } else {
            (num, den)
        };
        let lc = d.lead().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        if n.is_zero() {
            d = RatPoly::one();
        }
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn polynomial(p: RatPoly) -> Self {
        RationalFunction { num: p, den: RatPoly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_expr(&self) -> Expr {
        let n = poly_expr(&self.num);
        if self.den.degree() == Some(0) {
            n
        } else {
            n / poly_expr(&self.den)
        }
    }

    /// `p(z/η)/q(z/η)`.
    fn rescale(&self, step: &Rational) -> Result<Self> {
        let inv = step.recip();
        RationalFunction::new(self.num.scale_arg(&inv), self.den.scale_arg(&inv))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `{h ≥ 0 : deg gcd(p(z), q(z+h)) > 0}`, ascending.
///
/// `Res_z(p(z), q(z+h))` is a polynomial in `h` of degree at most
/// `deg p · deg q`; it is interpolated from exact values at `h = 0, 1, …`
/// and its nonnegative integer roots are confirmed by a gcd.
pub fn dispersion(p: &RatPoly, q: &RatPoly) -> Vec<u64> {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Vec::new();
    };
    if dp == 0 || dq == 0 {
        return Vec::new();
    }
    let nodes: Vec<Rational> = (0..=(dp * dq) as i64).map(rat).collect();
    let values: Vec<Rational> = nodes.iter().map(|h| resultant(p, &q.shift(h))).collect();
    let res = interpolate(&nodes, &values);
    let mut out = BTreeSet::new();
    for h in integer_roots(&res) {
        if h.is_negative() {
            continue;
        }
        let Some(hu) = h.to_u64() else { continue };
        let g = p.gcd(&q.shift(&Rational::from_integer(h)));
        if g.degree().unwrap_or(0) > 0 {
            out.insert(hu);
        }
    }
    out.into_iter().collect()
}

/// Newton divided differences, returned in the monomial basis.
fn interpolate(x: &[Rational], y: &[Rational]) -> RatPoly {
    let n = x.len();
    let mut c = y.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&x[i] - &x[i - k]);
        }
    }
    let mut p = RatPoly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = &(&p * &RatPoly::linear_root(x[i].clone())) + &RatPoly::constant(c[i].clone());
    }
    p
}

/// Abramov's universal denominator of a unit-step recurrence: every rational
/// solution can be written `p/u` with `p` a polynomial. Monic.
pub fn universal_denominator(rec: &PolynomialRecurrence) -> RatPoly {
    let rec = rec.normalized();
    let n = rec.order() as i64;
    let mut a = rec.coeffs[0].clone();
    let mut b = rec.coeffs[rec.order()].shift_by_integer(-n);
    let mut u = RatPoly::one();
    let hs = dispersion(&a, &b);
    for &h in hs.iter().rev() {
        let h = h as i64;
        let d = a.gcd(&b.shift_by_integer(h));
        if d.degree().unwrap_or(0) == 0 {
            continue;
        }
        a = a.exact_div(&d).expect("gcd divides");
        b = b.exact_div(&d.shift_by_integer(-h)).expect("shifted gcd divides");
        for i in 0..=h {
            u = &u * &d.shift_by_integer(-i);
        }
    }
    u.monic()
}

/// Polynomial solutions `particular + span(basis)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSolutions {
    pub particular: Option<RatPoly>,
    pub basis: Vec<RatPoly>,
    pub degree_bound: usize,
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Bound on the degree of polynomial solutions of a unit-step recurrence.
///
/// Writing the operator as `Σ_k q_k(z) Δ^k` with `q_k = Σ_j C(j,k) b_j`, a
/// polynomial of degree `d` is mapped to degree `d + β` with
/// `β = max_k (deg q_k − k)`, unless `d` is a root of the cancellation
/// polynomial `Σ_{k attaining β} lc(q_k) · d(d−1)…(d−k+1)`.
pub fn degree_bound(rec: &PolynomialRecurrence) -> usize {
    let rec = rec.normalized();
    let n = rec.order();
    let q: Vec<RatPoly> = (0..=n)
        .map(|k| {
            (k..=n).fold(RatPoly::zero(), |acc, j| &acc + &rec.coeffs[j].scale(&binomial(j, k)))
        })
        .collect();
    let beta = q
        .iter()
        .enumerate()
        .filter_map(|(k, qk)| qk.degree().map(|d| d as i64 - k as i64))
        .max()
        .expect("b_n is nonzero, so q_n is");
    let mut cancel = RatPoly::zero();
    for (k, qk) in q.iter().enumerate() {
        if qk.degree().map(|d| d as i64 - k as i64) == Some(beta) {
            let falling = (0..k).fold(RatPoly::one(), |acc, i| &acc * &RatPoly::linear_root(rat(i as i64)));
            cancel = &cancel + &falling.scale(qk.lead().expect("nonzero"));
        }
    }
    let mut bound = 0i64;
    if let Some(r) = rec.rhs.degree() {
        bound = bound.max(r as i64 - beta);
    }
    for root in integer_roots(&cancel) {
        if let Some(d) = root.to_i64() {
            bound = bound.max(d);
        }
    }
    bound.max(0) as usize
}

/// All polynomial solutions of a recurrence, by undetermined coefficients.
pub fn polynomial_solutions(rec: &PolynomialRecurrence) -> Result<PolynomialSolutions> {
    let norm = rec.normalized();
    let d = degree_bound(&norm);
    if d > MAX_DEGREE_BOUND {
        return Err(Error::invalid(format!("degree bound {d} exceeds {MAX_DEGREE_BOUND}")));
    }
    let images: Vec<RatPoly> = (0..=d).map(|i| norm.apply_poly(&RatPoly::monomial(Rational::one(), i))).collect();
    let rows = images
        .iter()
        .chain(std::iter::once(&norm.rhs))
        .filter_map(|p| p.degree())
        .max()
        .map_or(1, |m| m + 1);
    let matrix: Vec<Vec<Rational>> =
        (0..rows).map(|r| images.iter().map(|img| img.coeff(r)).collect()).collect();
    let rhs: Vec<Rational> = (0..rows).map(|r| norm.rhs.coeff(r)).collect();
    let sol = solve_affine(&matrix, &rhs);
    let to_poly = |v: &Vec<Rational>| RatPoly::new(v.clone());
    let back = |p: RatPoly| -> RatPoly {
        if rec.step.is_one() {
            p
        } else {
            p.scale_arg(&rec.step.recip())
        }
    };
    Ok(PolynomialSolutions {
        particular: sol.particular.as_ref().map(to_poly).map(back),
        basis: sol.kernel.iter().filter(|v| !is_zero_vector(v)).map(to_poly).map(back).collect(),
        degree_bound: d,
    })
}

/// Rational solutions `particular + span(basis)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSolutionSet {
    pub particular: Option<RationalFunction>,
    pub basis: Vec<RationalFunction>,
    /// Universal denominator of the unit-step form.
    pub universal_denominator: RatPoly,
    pub degree_bound: usize,
    /// Step of the original recurrence; solutions were found in `w = z/η`.
    pub step: Rational,
    pub recurrence: PolynomialRecurrence,
}

impl RationalSolutionSet {
    pub fn has_solution(&self) -> bool {
        self.particular.is_some()
    }

    /// Certificate of the particular solution against the original recurrence.
    pub fn certificate(&self) -> Option<Certificate> {
        self.particular.as_ref().map(|f| self.recurrence.certificate(f))
    }

    pub fn to_json(&self) -> Value {
        let hom = self.recurrence.homogeneous();
        json!({
            "recurrence": self.recurrence.to_json(),
            "universal_denominator": self.universal_denominator.to_string(),
            "degree_bound": self.degree_bound,
            "transform": if self.step.is_one() {
                Value::Null
            } else {
                json!(format!("z = {}*w", format_rational(&self.step)))
            },
            "particular": self.particular.as_ref().map_or(Value::Null, |f| json!({
                "numerator": f.num.to_string(),
                "denominator": f.den.to_string(),
                "expr": f.to_string(),
                "certificate": self.recurrence.certificate(f).to_json(),
            })),
            "basis": self.basis.iter().map(|f| json!({
                "numerator": f.num.to_string(),
                "denominator": f.den.to_string(),
                "expr": f.to_string(),
                "certificate": hom.certificate(f).to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// All rational solutions, each re-verified by exact substitution.
pub fn rational_solutions(rec: &PolynomialRecurrence) -> Result<RationalSolutionSet> {
    let norm = rec.normalized();
    let u = universal_denominator(&norm);
    let n = norm.order();
    let shifted: Vec<RatPoly> = (0..=n).map(|j| u.shift_by_integer(j as i64)).collect();
    let l = shifted.iter().fold(RatPoly::one(), |acc, s| acc.lcm(s));
    let cleared = PolynomialRecurrence::new(
        norm.coeffs
            .iter()
            .zip(&shifted)
            .map(|(b, s)| b * &l.exact_div(s).expect("lcm is divisible"))
            .collect(),
        &norm.rhs * &l,
    )?;
    let polys = polynomial_solutions(&cleared)?;
    let lift = |p: &RatPoly| -> Result<RationalFunction> {
        RationalFunction::new(p.clone(), u.clone())?.rescale(&rec.step)
    };
    let particular = polys.particular.as_ref().map(lift).transpose()?;
    let basis = polys.basis.iter().map(lift).collect::<Result<Vec<_>>>()?;

    if let Some(f) = &particular {
        if !rec.certificate(f).is_zero() {
            return Err(Error::Degenerate(format!("particular solution {f} failed exact re-verification")));
        }
    }
    let hom = rec.homogeneous();
    if let Some(f) = basis.iter().find(|f| !hom.certificate(f).is_zero()) {
        return Err(Error::Degenerate(format!("homogeneous solution {f} failed exact re-verification")));
    }
    Ok(RationalSolutionSet {
        particular,
        basis,
        universal_denominator: u,
        degree_bound: polys.degree_bound,
        step: rec.step.clone(),
        recurrence: rec.clone(),
    })
}
