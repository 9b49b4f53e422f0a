use std::sync::Arc;

use num_complex::Complex64;

use super::{BinOp, Expr, Func};

// Builders that drop additive zeros and multiplicative ones/zeros, keeping
// derivative trees from filling up with `0 * ...` terms.
fn add(a: Expr, b: Expr) -> Expr {
    if a.is_const_zero() {
        b
    } else if b.is_const_zero() {
        a
    } else {
        a + b
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_const_zero() {
        a
    } else if a.is_const_zero() {
        -b
    } else {
        a - b
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_const_zero() || b.is_const_zero() {
        Expr::zero()
    } else if a.is_const_one() {
        b
    } else if b.is_const_one() {
        a
    } else {
        a * b
    }
}

impl Expr {
    /// Symbolic derivative with respect to `z`.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var => Expr::one(),
            Expr::Unary(f, a) => {
                let u = a.as_ref().clone();
                let du = a.derivative();
                if du.is_const_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Neg => return -du,
                    Func::Exp => self.clone(),
                    Func::Log => return du / u,
                    Func::Sin => u.cos(),
                    Func::Cos => -u.sin(),
                    Func::Tan => Expr::one() + u.tan().powi(2),
                    Func::Gamma => u.clone().gamma() * u.digamma(),
                    Func::Polygamma(k) => Expr::apply(Func::Polygamma(k + 1), u),
                };
                mul(outer, du)
            }
            Expr::Binary(op, a, b) => {
                let (u, v) = (a.as_ref().clone(), b.as_ref().clone());
                let (du, dv) = (a.derivative(), b.derivative());
                match op {
                    BinOp::Add => add(du, dv),
                    BinOp::Sub => sub(du, dv),
                    BinOp::Mul => add(mul(du, v), mul(u, dv)),
                    BinOp::Div => {
                        let first = if du.is_const_zero() { Expr::zero() } else { du / v.clone() };
                        let second = if dv.is_const_zero() {
                            Expr::zero()
                        } else {
                            mul(u, dv) / v.powi(2)
                        };
                        sub(first, second)
                    }
                    BinOp::Pow => {
                        if !v.contains_var() {
                            // d/dz u^n = n u^(n-1) u'
                            let n = v.as_const().unwrap_or_else(|| {
                                v.eval(Complex64::new(0.0, 0.0)).value().unwrap_or_default()
                            });
                            let reduced = u.clone().pow(Expr::constant(n - 1.0));
                            mul(mul(Expr::constant(n), reduced), du)
                        } else if !u.contains_var() {
                            // d/dz a^v = a^v · Log a · v'
                            mul(mul(self.clone(), u.ln()), dv)
                        } else {
                            // a^b (b' Log a + b a'/a)
                            let inner = add(mul(dv, u.clone().ln()), mul(v, du) / u);
                            mul(self.clone(), inner)
                        }
                    }
                }
            }
        }
    }

    /// The `k`-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Expr {
        (0..k).fold(self.clone(), |e, _| e.derivative())
    }

    /// Replaces `z` by `replacement` everywhere.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var => replacement.clone(),
            Expr::Unary(f, a) => Expr::Unary(*f, Arc::new(a.substitute(replacement))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Arc::new(a.substitute(replacement)), Arc::new(b.substitute(replacement)))
            }
        }
    }

    /// `e(z + delta)` as a new tree.
    pub fn shift(&self, delta: Complex64) -> Expr {
        if delta == Complex64::new(0.0, 0.0) {
            return self.clone();
        }
        self.substitute(&(Expr::var() + Expr::constant(delta)))
    }
}
