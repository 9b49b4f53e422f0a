//! Printing in the parser's grammar. Parenthesisation mirrors the parser's
//! precedence rules exactly, so `parse(print(e))` rebuilds the same tree.

use std::fmt;

use num_complex::Complex64;

use super::{BinOp, Expr, Func};

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Unary(Func::Neg, _) => 3,
        Expr::Binary(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    // Rust's float Display is the shortest exact round-trip form
    if c.im == 0.0 {
        if c.re < 0.0 || (c.re == 0.0 && c.re.is_sign_negative()) {
            write!(f, "(-{})", -c.re)
        } else {
            write!(f, "{}", c.re)
        }
    } else if c.re == 0.0 {
        if c.im < 0.0 {
            write!(f, "(-{}i)", -c.im)
        } else {
            write!(f, "{}i", c.im)
        }
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        if c.re < 0.0 {
            write!(f, "(-{}{sign}{}i)", -c.re, c.im.abs())
        } else {
            write!(f, "({}{sign}{}i)", c.re, c.im.abs())
        }
    }
}

fn wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => write!(f, "z"),
            Expr::Unary(Func::Neg, a) => {
                write!(f, "-")?;
                wrapped(f, a, prec(a) < 3)
            }
            Expr::Unary(Func::Polygamma(k), a) if *k > 0 => write!(f, "polygamma({k}, {a})"),
            Expr::Unary(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    wrapped(f, a, prec(a) <= 4)?;
                    write!(f, "^")?;
                    return wrapped(f, b, prec(b) < 3);
                }
                // a leading `-` on the right would otherwise read as a unary
                // minus inside the right operand, which is what we want, but
                // keep operands of the same level parenthesised on the right
                wrapped(f, a, prec(a) < p)?;
                write!(f, "{sym}")?;
                wrapped(f, b, prec(b) <= p)
            }
        }
    }
}
