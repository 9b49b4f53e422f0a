use num_complex::{Complex, Complex64};
use num_traits::Zero;

use super::{as_small_integer, BinOp, Expr, Func};
use crate::scalar::{complex_lit, is_finite, wrap_angle, Real};
use crate::special;

/// Denominators smaller than this in magnitude raise the pole flag.
pub const POLE_EPSILON: f64 = 1e-12;
/// Values larger than this in magnitude raise the overflow marker.
pub const OVERFLOW_CAP: f64 = 1e300;

/// Result of evaluating an expression at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalOutcome<F = f64> {
    Value(Complex<F>),
    /// A denominator vanished (to within [`POLE_EPSILON`]) or a function was
    /// evaluated at one of its poles.
    Pole,
    /// Some intermediate or final magnitude exceeded [`OVERFLOW_CAP`].
    Overflow,
}

impl<F: Real> EvalOutcome<F> {
    pub fn value(self) -> Option<Complex<F>> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, EvalOutcome::Value(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Singular {
    Pole,
    Overflow,
}

/// A complex number stored through its logarithm, so magnitudes far outside
/// the floating-point range stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogValue<F = f64> {
    Zero,
    /// `log v`; the imaginary part is only meaningful modulo 2π.
    Log(Complex<F>),
}

impl<F: Real> LogValue<F> {
    pub fn from_value(v: Complex<F>) -> Self {
        if v.is_zero() {
            LogValue::Zero
        } else {
            LogValue::Log(v.ln())
        }
    }

    /// `log |v|`, `-∞` for zero.
    pub fn log_abs(&self) -> F {
        match self {
            LogValue::Zero => F::neg_infinity(),
            LogValue::Log(l) => l.re,
        }
    }

    /// `arg v` in `(-π, π]`; zero for the zero value.
    pub fn arg(&self) -> F {
        match self {
            LogValue::Zero => F::zero(),
            LogValue::Log(l) => wrap_angle(l.im),
        }
    }

    /// The plain value, or `None` when it would overflow.
    pub fn to_value(&self) -> Option<Complex<F>> {
        match self {
            LogValue::Zero => Some(Complex::zero()),
            LogValue::Log(l) => {
                if l.re > F::lit(OVERFLOW_CAP).ln() {
                    None
                } else {
                    Some(l.exp())
                }
            }
        }
    }

    fn add(self, other: Self) -> Self {
        match (self, other) {
            (LogValue::Zero, b) => b,
            (a, LogValue::Zero) => a,
            (LogValue::Log(a), LogValue::Log(b)) => {
                let (big, small) = if a.re >= b.re { (a, b) } else { (b, a) };
                let t = (small - big).exp() + F::one();
                if t.is_zero() {
                    LogValue::Zero
                } else {
                    LogValue::Log(big + t.ln())
                }
            }
        }
    }
}

/// Result of a log-domain evaluation; see [`Expr::eval_log`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogOutcome<F = f64> {
    Value(LogValue<F>),
    Pole,
    Overflow,
}

impl<F: Real> LogOutcome<F> {
    pub fn value(self) -> Option<LogValue<F>> {
        match self {
            LogOutcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl Expr {
    /// Evaluates at `z` with principal branches.
    ///
    /// Near-singular denominators and oversized magnitudes are reported as
    /// [`EvalOutcome::Pole`] / [`EvalOutcome::Overflow`] instead of producing
    /// NaN or infinity.
    pub fn eval<F: Real>(&self, z: Complex<F>) -> EvalOutcome<F> {
        match eval_plain(self, z) {
            Ok(v) => EvalOutcome::Value(v),
            Err(Singular::Pole) => EvalOutcome::Pole,
            Err(Singular::Overflow) => EvalOutcome::Overflow,
        }
    }

    /// Evaluates `log f(z)` (modulo 2πi) without ever forming `f(z)` when it
    /// would leave the floating-point range.
    ///
    /// Products, quotients, powers and `exp` act on logarithms directly; sums
    /// use `log(a + b) = log a + log(1 + b/a)`. Only exact zeros of a
    /// denominator raise [`LogOutcome::Pole`]; arguments of `exp`, `sin`,
    /// `cos`, `tan`, `gamma` and non-constant exponents must still fit in a
    /// float, otherwise [`LogOutcome::Overflow`] is returned.
    pub fn eval_log<F: Real>(&self, z: Complex<F>) -> LogOutcome<F> {
        match eval_log_inner(self, z) {
            Ok(v) => LogOutcome::Value(v),
            Err(Singular::Pole) => LogOutcome::Pole,
            Err(Singular::Overflow) => LogOutcome::Overflow,
        }
    }
}

impl Expr {
    /// Smallest magnitude, over the tree, of a quantity that vanishes at a
    /// singularity: division denominators, `cos` under `tan`, the distance of a
    /// `gamma`/`polygamma` argument to the poles, `log` arguments and bases of
    /// negative powers. Zero when evaluation itself fails; infinity when the
    /// tree has no such node. Used to keep residual samples away from poles.
    pub fn singularity_margin(&self, z: Complex64) -> f64 {
        margin(self, z).map_or(0.0, |(_, m)| m)
    }
}

fn margin(e: &Expr, z: Complex64) -> Option<(Complex64, f64)> {
    Some(match e {
        Expr::Const(c) => (*c, f64::INFINITY),
        Expr::Var => (z, f64::INFINITY),
        Expr::Unary(f, a) => {
            let (x, m) = margin(a, z)?;
            let local = match f {
                Func::Tan => x.cos().norm(),
                Func::Log => x.norm(),
                Func::Gamma | Func::Polygamma(_) if x.re < 0.5 => {
                    (x - Complex64::new(x.re.round(), 0.0)).norm()
                }
                _ => f64::INFINITY,
            };
            (e.eval(z).value()?, m.min(local))
        }
        Expr::Binary(op, a, b) => {
            let (x, ma) = margin(a, z)?;
            let (y, mb) = margin(b, z)?;
            let local = match op {
                BinOp::Div => y.norm(),
                BinOp::Pow if b.as_const().is_none_or(|c| c.re < 0.0) => x.norm(),
                _ => f64::INFINITY,
            };
            (e.eval(z).value()?, ma.min(mb).min(local))
        }
    })
}

fn checked<F: Real>(v: Complex<F>) -> Result<Complex<F>, Singular> {
    if !is_finite(v) || v.norm() > F::lit(OVERFLOW_CAP) {
        Err(Singular::Overflow)
    } else {
        Ok(v)
    }
}

fn eval_plain<F: Real>(e: &Expr, z: Complex<F>) -> Result<Complex<F>, Singular> {
    let eps = F::lit(POLE_EPSILON);
    let v = match e {
        Expr::Const(c) => complex_lit(*c),
        Expr::Var => z,
        Expr::Unary(f, a) => {
            let x = eval_plain(a, z)?;
            match f {
                Func::Neg => -x,
                Func::Exp => {
                    if x.re > F::lit(OVERFLOW_CAP).ln() {
                        return Err(Singular::Overflow);
                    }
                    x.exp()
                }
                Func::Log => {
                    if x.is_zero() {
                        return Err(Singular::Pole);
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => {
                    let (t, den) = special::tan_with_denominator(x);
                    if den < eps {
                        return Err(Singular::Pole);
                    }
                    t
                }
                Func::Gamma => special::gamma(x).ok_or(Singular::Pole)?,
                Func::Polygamma(k) => special::polygamma(*k, x).ok_or(Singular::Pole)?,
            }
        }
        Expr::Binary(op, a, b) => {
            let x = eval_plain(a, z)?;
            match op {
                BinOp::Add => x + eval_plain(b, z)?,
                BinOp::Sub => x - eval_plain(b, z)?,
                BinOp::Mul => x * eval_plain(b, z)?,
                BinOp::Div => {
                    let y = eval_plain(b, z)?;
                    if y.norm() < eps {
                        return Err(Singular::Pole);
                    }
                    x / y
                }
                BinOp::Pow => {
                    if let Some(n) = b.as_const().and_then(as_small_integer) {
                        if n < 0 && x.norm() < eps {
                            return Err(Singular::Pole);
                        }
                        x.powi(n)
                    } else {
                        let y = eval_plain(b, z)?;
                        if x.is_zero() {
                            if y.re > F::zero() {
                                Complex::zero()
                            } else {
                                return Err(Singular::Pole);
                            }
                        } else {
                            let w = y * x.ln();
                            if w.re > F::lit(OVERFLOW_CAP).ln() {
                                return Err(Singular::Overflow);
                            }
                            w.exp()
                        }
                    }
                }
            }
        }
    };
    checked(v)
}

/// Working value of the log-domain evaluator: plain while the magnitude is in
/// range (so exact cancellation survives), logarithmic otherwise.
#[derive(Clone, Copy)]
enum Hybrid<F> {
    Plain(Complex<F>),
    /// Logarithm of a nonzero value.
    Log(Complex<F>),
}

impl<F: Real> Hybrid<F> {
    fn in_range(v: Complex<F>) -> bool {
        let n = v.norm();
        is_finite(v) && n <= F::lit(OVERFLOW_CAP) && (v.is_zero() || n >= F::lit(1.0 / OVERFLOW_CAP))
    }

    fn from_plain(v: Complex<F>) -> Self {
        if Self::in_range(v) || !is_finite(v) {
            Hybrid::Plain(v)
        } else {
            Hybrid::Log(v.ln())
        }
    }

    fn from_log(l: Complex<F>) -> Self {
        if l.re.abs() < F::lit(OVERFLOW_CAP).ln() {
            Hybrid::Plain(l.exp())
        } else {
            Hybrid::Log(l)
        }
    }

    fn log(self) -> Option<Complex<F>> {
        match self {
            Hybrid::Plain(v) if v.is_zero() => None,
            Hybrid::Plain(v) => Some(v.ln()),
            Hybrid::Log(l) => Some(l),
        }
    }

    fn plain(self) -> Result<Complex<F>, Singular> {
        match self {
            Hybrid::Plain(v) => Ok(v),
            Hybrid::Log(l) if l.re < F::zero() => Ok(Complex::zero()),
            Hybrid::Log(_) => Err(Singular::Overflow),
        }
    }

    fn into_log_value(self) -> LogValue<F> {
        match self.log() {
            None => LogValue::Zero,
            Some(l) => LogValue::Log(l),
        }
    }

    fn neg(self) -> Self {
        match self {
            Hybrid::Plain(v) => Hybrid::Plain(-v),
            Hybrid::Log(l) => Hybrid::Log(Complex::new(l.re, wrap_angle(l.im + F::PI()))),
        }
    }

    fn add(self, other: Self) -> Self {
        if let (Hybrid::Plain(a), Hybrid::Plain(b)) = (self, other) {
            return Hybrid::from_plain(a + b);
        }
        match LogValue::from_hybrid(self).add(LogValue::from_hybrid(other)) {
            LogValue::Zero => Hybrid::Plain(Complex::zero()),
            LogValue::Log(l) => Hybrid::from_log(l),
        }
    }

    fn mul(self, other: Self) -> Self {
        if let (Hybrid::Plain(a), Hybrid::Plain(b)) = (self, other) {
            let p = a * b;
            if Self::in_range(p) && (!p.is_zero() || a.is_zero() || b.is_zero()) {
                return Hybrid::Plain(p);
            }
        }
        match (self.log(), other.log()) {
            (Some(x), Some(y)) => Hybrid::from_log(x + y),
            _ => Hybrid::Plain(Complex::zero()),
        }
    }

    fn div(self, other: Self) -> Result<Self, Singular> {
        let Some(y) = other.log() else {
            return Err(Singular::Pole);
        };
        if let (Hybrid::Plain(a), Hybrid::Plain(b)) = (self, other) {
            let q = a / b;
            if Self::in_range(q) && (!q.is_zero() || a.is_zero()) {
                return Ok(Hybrid::Plain(q));
            }
        }
        Ok(match self.log() {
            None => Hybrid::Plain(Complex::zero()),
            Some(x) => Hybrid::from_log(x - y),
        })
    }
}

impl<F: Real> LogValue<F> {
    fn from_hybrid(h: Hybrid<F>) -> Self {
        h.into_log_value()
    }
}

fn eval_log_inner<F: Real>(e: &Expr, z: Complex<F>) -> Result<LogValue<F>, Singular> {
    Ok(eval_hybrid(e, z)?.into_log_value())
}

fn eval_hybrid<F: Real>(e: &Expr, z: Complex<F>) -> Result<Hybrid<F>, Singular> {
    let big = F::lit(OVERFLOW_CAP).ln();
    Ok(match e {
        Expr::Const(c) => Hybrid::from_plain(complex_lit(*c)),
        Expr::Var => Hybrid::from_plain(z),
        Expr::Unary(f, a) => {
            let h = eval_hybrid(a, z)?;
            match f {
                Func::Neg => h.neg(),
                Func::Exp => {
                    let x = h.plain()?;
                    if x.re.abs() < big {
                        Hybrid::Plain(x.exp())
                    } else {
                        Hybrid::Log(x)
                    }
                }
                Func::Log => {
                    let l = h.log().ok_or(Singular::Pole)?;
                    Hybrid::from_plain(Complex::new(l.re, wrap_angle(l.im)))
                }
                Func::Sin | Func::Cos => {
                    let x = h.plain()?;
                    if x.im.abs() <= F::lit(30.0) {
                        Hybrid::from_plain(if *f == Func::Sin { x.sin() } else { x.cos() })
                    } else {
                        let l = if *f == Func::Sin { special::log_sin(x) } else { special::log_cos(x) };
                        l.map_or(Hybrid::Plain(Complex::zero()), Hybrid::from_log)
                    }
                }
                Func::Tan => {
                    let x = h.plain()?;
                    let (t, den) = special::tan_with_denominator(x);
                    if den.is_zero() || !is_finite(t) {
                        return Err(Singular::Pole);
                    }
                    Hybrid::from_plain(t)
                }
                Func::Gamma => {
                    let x = h.plain()?;
                    match special::gamma(x) {
                        Some(g) if Hybrid::in_range(g) && !g.is_zero() => Hybrid::Plain(g),
                        _ => Hybrid::from_log(special::ln_gamma(x).ok_or(Singular::Pole)?),
                    }
                }
                Func::Polygamma(k) => {
                    let x = h.plain()?;
                    Hybrid::from_plain(special::polygamma(*k, x).ok_or(Singular::Pole)?)
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let ha = eval_hybrid(a, z)?;
            match op {
                BinOp::Add => ha.add(eval_hybrid(b, z)?),
                BinOp::Sub => ha.add(eval_hybrid(b, z)?.neg()),
                BinOp::Mul => ha.mul(eval_hybrid(b, z)?),
                BinOp::Div => ha.div(eval_hybrid(b, z)?)?,
                BinOp::Pow => {
                    if let Some(n) = b.as_const().and_then(as_small_integer) {
                        match (ha, ha.log()) {
                            (_, None) if n > 0 => Hybrid::Plain(Complex::zero()),
                            (_, None) if n == 0 => Hybrid::Plain(Complex::new(F::one(), F::zero())),
                            (_, None) => return Err(Singular::Pole),
                            (Hybrid::Plain(x), Some(l)) => {
                                let p = x.powi(n);
                                if Hybrid::in_range(p) && !p.is_zero() {
                                    Hybrid::Plain(p)
                                } else {
                                    Hybrid::from_log(l * F::lit(n as f64))
                                }
                            }
                            (Hybrid::Log(_), Some(l)) => Hybrid::from_log(l * F::lit(n as f64)),
                        }
                    } else {
                        let y = eval_hybrid(b, z)?.plain()?;
                        match ha.log() {
                            None if y.re > F::zero() => Hybrid::Plain(Complex::zero()),
                            None => return Err(Singular::Pole),
                            Some(l) => {
                                let w = y * Complex::new(l.re, wrap_angle(l.im));
                                if w.re.abs() < big {
                                    Hybrid::Plain(w.exp())
                                } else {
                                    Hybrid::Log(w)
                                }
                            }
                        }
                    }
                }
            }
        }
    })
}
