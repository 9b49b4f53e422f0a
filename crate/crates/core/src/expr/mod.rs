//! Expression trees in one complex variable `z`.
//!
//! An [`Expr`] is immutable; children are shared through [`Arc`] so shifted or
//! differentiated copies are cheap and trees can be evaluated from several
//! threads at once. Builders fold constant-only subtrees; no other algebraic
//! simplification is attempted, so correctness is always checked numerically.
//!
//! Logarithms and non-integer powers use principal branches:
//! `a^b = exp(b · Log a)` with `Im Log a ∈ (-π, π]`.

mod calculus;
mod eval;
mod parse;
mod print;

use std::ops;
use std::sync::Arc;

use num_complex::Complex64;

pub use eval::{EvalOutcome, LogValue, LogOutcome, OVERFLOW_CAP, POLE_EPSILON};
pub use parse::parse;

/// Single-argument node kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Gamma,
    /// ψ⁽ᵏ⁾; `Polygamma(0)` is the digamma function.
    Polygamma(u32),
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Neg => "-",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Gamma => "gamma",
            Func::Polygamma(0) => "digamma",
            Func::Polygamma(_) => "polygamma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Unary(Func, Arc<Expr>),
    Binary(BinOp, Arc<Expr>, Arc<Expr>),
}

impl Expr {
    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn one() -> Expr {
        Expr::real(1.0)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Complex64::new(0.0, 0.0))
    }

    pub fn is_const_one(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Complex64::new(1.0, 0.0))
    }

    /// Applies a unary function, folding constant arguments where the result is finite.
    pub fn apply(func: Func, arg: Expr) -> Expr {
        if let Expr::Const(c) = arg {
            let folded = match func {
                Func::Neg => Some(-c),
                Func::Exp => Some(c.exp()),
                _ => None,
            };
            if let Some(v) = folded.filter(|v| v.re.is_finite() && v.im.is_finite()) {
                return Expr::Const(v);
            }
        }
        Expr::Unary(func, Arc::new(arg))
    }

    /// Builds a binary node, folding `Const ∘ Const` for the field operations.
    ///
    /// # Panics
    ///
    /// Panics if `op` is [`BinOp::Div`] and `rhs` is the literal constant zero;
    /// use [`Expr::checked_div`] for a fallible version.
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        assert!(
            !(op == BinOp::Div && rhs.is_const_zero()),
            "division by the literal constant zero"
        );
        if let (Expr::Const(a), Expr::Const(b)) = (&lhs, &rhs) {
            let folded = match op {
                BinOp::Add => Some(a + b),
                BinOp::Sub => Some(a - b),
                BinOp::Mul => Some(a * b),
                BinOp::Div => Some(a / b),
                BinOp::Pow => None,
            };
            if let Some(v) = folded.filter(|v| v.re.is_finite() && v.im.is_finite()) {
                return Expr::Const(v);
            }
        }
        Expr::Binary(op, Arc::new(lhs), Arc::new(rhs))
    }

    pub fn checked_div(self, rhs: Expr) -> crate::Result<Expr> {
        if rhs.is_const_zero() {
            return Err(crate::Error::invalid("division by the literal constant zero"));
        }
        Ok(Expr::binary(BinOp::Div, self, rhs))
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::binary(BinOp::Pow, self, exponent)
    }

    pub fn powi(self, n: i32) -> Expr {
        self.pow(Expr::real(n as f64))
    }

    pub fn exp(self) -> Expr {
        Expr::apply(Func::Exp, self)
    }

    pub fn ln(self) -> Expr {
        Expr::apply(Func::Log, self)
    }

    pub fn sin(self) -> Expr {
        Expr::apply(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::apply(Func::Cos, self)
    }

    pub fn tan(self) -> Expr {
        Expr::apply(Func::Tan, self)
    }

    pub fn gamma(self) -> Expr {
        Expr::apply(Func::Gamma, self)
    }

    pub fn digamma(self) -> Expr {
        Expr::apply(Func::Polygamma(0), self)
    }

    /// `1 / self`.
    pub fn recip(self) -> Expr {
        Expr::one() / self
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Unary(_, a) => a.contains_var(),
            Expr::Binary(_, a, b) => a.contains_var() || b.contains_var(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, a) => 1 + a.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Syntactic sufficient condition for being an entire function of `z`.
    ///
    /// `false` means "may have poles or branch points", not "has poles".
    pub fn is_entire(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Unary(f, a) => match f {
                Func::Neg | Func::Exp | Func::Sin | Func::Cos => a.is_entire(),
                Func::Log | Func::Tan | Func::Gamma | Func::Polygamma(_) => !a.contains_var(),
            },
            Expr::Binary(op, a, b) => match op {
                BinOp::Add | BinOp::Sub | BinOp::Mul => a.is_entire() && b.is_entire(),
                BinOp::Div => a.is_entire() && b.is_zero_free(),
                BinOp::Pow => match (a.as_ref(), b.as_const()) {
                    (base, Some(n)) if is_nonneg_integer(n) => base.is_entire(),
                    (Expr::Const(c), _) => *c != Complex64::new(0.0, 0.0) && b.is_entire(),
                    _ => !self.contains_var(),
                },
            },
        }
    }

    /// Syntactic sufficient condition for an entire function without zeros.
    pub fn is_zero_free(&self) -> bool {
        match self {
            Expr::Const(c) => *c != Complex64::new(0.0, 0.0),
            Expr::Var => false,
            Expr::Unary(Func::Exp, a) => a.is_entire(),
            Expr::Unary(Func::Neg, a) => a.is_zero_free(),
            Expr::Unary(..) => false,
            Expr::Binary(op, a, b) => match op {
                BinOp::Mul => a.is_zero_free() && b.is_zero_free(),
                BinOp::Div => a.is_zero_free() && b.is_zero_free(),
                BinOp::Pow => match (a.as_ref(), b.as_const()) {
                    (base, Some(n)) if is_nonneg_integer(n) => base.is_zero_free(),
                    (Expr::Const(c), _) => *c != Complex64::new(0.0, 0.0) && b.is_entire(),
                    _ => false,
                },
                BinOp::Add | BinOp::Sub => false,
            },
        }
    }
}

pub(crate) fn is_nonneg_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re >= 0.0 && c.re == c.re.round()
}

pub(crate) fn as_small_integer(c: Complex64) -> Option<i32> {
    (c.im == 0.0 && c.re == c.re.round() && c.re.abs() <= 64.0).then_some(c.re as i32)
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Self {
        Expr::Const(c)
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::real(x)
    }
}

macro_rules! bin_impl {
    ($tr:ident, $method:ident, $op:expr) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::binary($op, self, rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::binary($op, self.clone(), rhs.clone())
            }
        }
    };
}

bin_impl!(Add, add, BinOp::Add);
bin_impl!(Sub, sub, BinOp::Sub);
bin_impl!(Mul, mul, BinOp::Mul);
bin_impl!(Div, div, BinOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::apply(Func::Neg, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_folding() {
        let e = Expr::real(2.0) * Expr::real(3.0) + Expr::constant(Complex64::new(0.0, 1.0));
        assert_eq!(e, Expr::Const(Complex64::new(6.0, 1.0)));
        let e = -Expr::real(2.5);
        assert_eq!(e, Expr::real(-2.5));
        let e = Expr::var() * Expr::real(2.0);
        assert!(matches!(e, Expr::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn entire_classification() {
        let z = Expr::var();
        assert!(z.clone().exp().is_entire());
        assert!((z.clone() * z.clone()).sin().is_entire());
        assert!(!z.clone().tan().is_entire());
        assert!(!(Expr::one() / (z.clone() - Expr::one())).is_entire());
        assert!((Expr::one() / z.clone().exp()).is_entire());
        assert!(Expr::real(2.0).pow(z.clone()).is_zero_free());
        assert!(!z.clone().sin().is_zero_free());
        assert!(z.clone().powi(3).is_entire());
        assert!(!z.clone().powi(-1).is_entire());
        assert!(!z.pow(Expr::real(0.5)).is_entire());
    }

    #[test]
    #[should_panic(expected = "literal constant zero")]
    fn literal_zero_denominator_rejected() {
        let _ = Expr::var() / Expr::zero();
    }
}
