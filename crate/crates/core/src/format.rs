//! Text forms for scalars: `%.12g`-style reals, `a+bi` complex numbers and
//! exact rationals such as `-3/4` or `0.125`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::Rational;

/// Formats `x` like C's `%.{sig}g`.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= sig as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to 12 significant digits, the precision used by all text and JSON output.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    fmt_g(x, 12).parse().unwrap_or(x)
}

/// `a+bi` text with 12 significant digits; purely real values print without `i`.
pub fn format_complex(z: Complex64) -> String {
    let re = fmt_g(z.re, 12);
    if z.im == 0.0 {
        return re;
    }
    let im_abs = fmt_g(z.im.abs(), 12);
    let sign = if z.im < 0.0 { '-' } else { '+' };
    if z.re == 0.0 {
        if z.im < 0.0 {
            format!("-{im_abs}i")
        } else {
            format!("{im_abs}i")
        }
    } else {
        format!("{re}{sign}{im_abs}i")
    }
}

/// Parses a complex constant such as `1.0+2.0i`, `-3i`, `3/4` or `pi`.
///
/// Any variable-free expression of the grammar is accepted.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let expr = crate::expr::parse(text)?;
    constant_value(&expr).ok_or_else(|| Error::Format {
        text: text.to_string(),
        msg: "expected a finite constant".into(),
    })
}

fn constant_value(e: &Expr) -> Option<Complex64> {
    if e.contains_var() {
        return None;
    }
    e.eval(Complex64::new(0.0, 0.0)).value().filter(|v| v.re.is_finite() && v.im.is_finite())
}

/// Parses an exact rational: `7`, `-3/4`, `0.125`, `2.5e-3`, `1/3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = |msg: &str| Error::Format { text: text.to_string(), msg: msg.to_string() };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n).ok_or_else(|| err("bad numerator"))?;
        let d = parse_decimal(d).ok_or_else(|| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(&s).ok_or_else(|| err("not a rational number"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= p;
    } else {
        value /= p;
    }
    Some(if neg { -value } else { value })
}

/// `3/4`, `-2`, `0`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        let sign = if q.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}
