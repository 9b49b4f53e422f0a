//! Dense univariate polynomials over an arbitrary coefficient ring.
//!
//! [`Poly<T>`] stores coefficients in ascending degree with no trailing
//! (leading-degree) zeros. The same type serves exact arithmetic over
//! [`crate::Rational`] and floating-point work over complex numbers; the
//! Euclidean operations ([`Poly::divrem`], [`Poly::gcd`]) need a field and are
//! only meaningful with exact coefficients.

pub mod exact;
pub mod roots;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficient ring.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Coefficient field.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    /// Builds from ascending coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    /// The polynomial `z`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    /// `c · z^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `z - root`.
    pub fn linear_root(root: T) -> Self {
        Poly::new(vec![-root, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer with `-1` for the zero polynomial.
    pub fn degree_or_neg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(z + a)` by repeated synthetic division (Taylor shift).
    pub fn shift(&self, a: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone() * a.clone();
                c[j] = c[j].clone() + t;
            }
        }
        Poly::new(c)
    }

    /// `p(s · z)`.
    pub fn scale_arg(&self, s: &T) -> Self {
        let mut pow = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * pow.clone());
            pow = pow * s.clone();
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| &(&acc * q) + &Poly::constant(c.clone()))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division: `self = q · divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.lead().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - q.clone() * d.clone();
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::invalid("polynomial division is not exact"));
        }
        Ok(q)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).exact_div(&g).expect("gcd divides product").monic()
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
