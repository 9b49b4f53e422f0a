//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number ['i'] | 'i' | 'z' | 'pi' | 'e'
//!          | name '(' expr ')' | 'pow' '(' expr ',' expr ')'
//!          | 'polygamma' '(' integer ',' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `exp log sin cos tan gamma digamma sqrt pow polygamma`.

use num_complex::Complex64;

use super::{Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if ch.is_ascii_digit() || (ch == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent only when digits follow, so `2e` stays `2` then `e`
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let value: f64 = lit.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("malformed number `{lit}`"),
            })?;
            // imaginary suffix, possibly after spaces: `3i`, `3 i`
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let imag = j < bytes.len()
                && bytes[j] == b'i'
                && !bytes.get(j + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if imag {
                i = j + 1;
            }
            out.push((start, Tok::Num(value, imag)));
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match ch {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(ch),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
        i += ch.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { lhs + rhs } else { lhs - rhs };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let at = self.offset();
            let rhs = self.unary()?;
            lhs = if op == '*' {
                lhs * rhs
            } else {
                lhs.checked_div(rhs).map_err(|_| Error::Syntax {
                    pos: at,
                    msg: "division by literal zero".into(),
                })?
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(v, imag)) => Ok(Expr::constant(if imag {
                Complex64::new(0.0, v)
            } else {
                Complex64::new(v, 0.0)
            })),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.identifier(name, at),
            Some(tok) => Err(Error::Syntax { pos: at, msg: format!("unexpected token {tok:?}") }),
            None => Err(Error::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }

    fn call_arg(&mut self) -> Result<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn identifier(&mut self, name: String, at: usize) -> Result<Expr> {
        let func = match name.as_str() {
            "z" => return Ok(Expr::var()),
            "i" => return Ok(Expr::constant(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Expr::real(std::f64::consts::PI)),
            "e" => return Ok(Expr::real(std::f64::consts::E)),
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "gamma" => Func::Gamma,
            "digamma" => Func::Polygamma(0),
            "sqrt" => return Ok(self.call_arg()?.pow(Expr::real(0.5))),
            "pow" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(a.pow(b));
            }
            "polygamma" => {
                self.expect(Tok::LParen, "`(`")?;
                let k_at = self.offset();
                let k = match self.bump() {
                    Some(Tok::Num(v, false)) if v >= 0.0 && v == v.round() && v < 64.0 => v as u32,
                    _ => {
                        return Err(Error::Syntax {
                            pos: k_at,
                            msg: "polygamma order must be a small non-negative integer".into(),
                        })
                    }
                };
                self.expect(Tok::Comma, "`,`")?;
                let a = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Expr::apply(Func::Polygamma(k), a));
            }
            _ => return Err(Error::UnknownIdentifier { name, pos: at }),
        };
        Ok(Expr::apply(func, self.call_arg()?))
    }
}

/// Parses expression text in the variable `z`.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::BinOp;
    use std::sync::Arc;

    #[test]
    fn parses_function_application() {
        assert_eq!(parse("exp(z)").unwrap(), Expr::Unary(Func::Exp, Arc::new(Expr::Var)));
    }

    #[test]
    fn parses_literal_forms() {
        let expected = Expr::Binary(
            BinOp::Add,
            Arc::new(Expr::Binary(BinOp::Mul, Arc::new(Expr::real(2.0)), Arc::new(Expr::Var))),
            Arc::new(Expr::constant(Complex64::new(0.0, 3.0))),
        );
        assert_eq!(parse("2*z + 3i").unwrap(), expected);
    }

    #[test]
    fn parses_tan_pi_z() {
        let expected = Expr::Unary(
            Func::Tan,
            Arc::new(Expr::Binary(
                BinOp::Mul,
                Arc::new(Expr::real(std::f64::consts::PI)),
                Arc::new(Expr::Var),
            )),
        );
        assert_eq!(parse("tan(pi*z)").unwrap(), expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let z = Expr::var();
        assert_eq!(parse("2^3^z").unwrap(), Expr::real(2.0).pow(Expr::real(3.0).pow(z.clone())));
        assert_eq!(parse("-z^2").unwrap(), -(z.clone().powi(2)));
        assert_eq!(parse("z - 1 - 2").unwrap(), (z.clone() - Expr::real(1.0)) - Expr::real(2.0));
        assert_eq!(parse("z / 2 * 3").unwrap(), (z.clone() / Expr::real(2.0)) * Expr::real(3.0));
        assert_eq!(parse("2^-z").unwrap(), Expr::real(2.0).pow(-z));
        assert_eq!(parse("  1.5e-3 ").unwrap(), Expr::real(1.5e-3));
        assert_eq!(parse("2e").unwrap_err(), Error::Syntax { pos: 1, msg: "unexpected trailing input".into() });
    }

    #[test]
    fn reports_errors_with_positions() {
        assert_eq!(parse("sinh(z)").unwrap_err(), Error::UnknownIdentifier { name: "sinh".into(), pos: 0 });
        assert_eq!(parse("z + w").unwrap_err(), Error::UnknownIdentifier { name: "w".into(), pos: 4 });
        assert!(matches!(parse("(z + 1"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse("z $ 2"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("z / 0"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn sqrt_and_pow_sugar() {
        assert_eq!(parse("sqrt(z)").unwrap(), Expr::var().pow(Expr::real(0.5)));
        assert_eq!(parse("pow(z, 3)").unwrap(), Expr::var().powi(3));
        assert_eq!(parse("polygamma(1, z)").unwrap(), Expr::apply(Func::Polygamma(1), Expr::var()));
    }
}
