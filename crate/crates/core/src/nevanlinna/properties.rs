//! Finite-radius checks of classical growth lemmas.

use num_complex::Complex64;
use serde::Serialize;

use super::{counting, proximity, reciprocal, Target};
use crate::expr::{Expr, LogOutcome, LogValue};
use crate::sampling::par_map;
use crate::{Error, Result};

/// `T(r, f)` at a single radius.
pub fn characteristic_at(f: &Expr, r: f64, nodes: usize) -> Result<f64> {
    Ok(proximity(f, r, nodes)? + counting(f, r)?)
}

fn nonzero_characteristic(f: &Expr, r: f64, nodes: usize) -> Result<f64> {
    let t = characteristic_at(f, r, nodes)?;
    if t < 1e-12 {
        return Err(Error::Degenerate(format!("T(r, f) vanishes at r = {r}")));
    }
    Ok(t)
}

/// `T(r, f²) / T(r, f)`; tends to 2.
pub fn degree_law_ratio(f: &Expr, r: f64, nodes: usize) -> Result<f64> {
    let t = nonzero_characteristic(f, r, nodes)?;
    Ok(characteristic_at(&f.clone().powi(2), r, nodes)? / t)
}

/// `|T(r, f(z+η)) − T(r, f)| / T(r, f)`.
pub fn shift_deviation(f: &Expr, eta: Complex64, r: f64, nodes: usize) -> Result<f64> {
    let t = nonzero_characteristic(f, r, nodes)?;
    Ok((characteristic_at(&f.shift(eta), r, nodes)? - t).abs() / t)
}

/// `T(r, 1/(f−a)) − T(r, f)` and `T(r, f)`.
pub fn first_main_theorem_gap(f: &Expr, a: Target, r: f64, nodes: usize) -> Result<(f64, f64)> {
    let t = characteristic_at(f, r, nodes)?;
    let g = match a {
        Target::Finite(_) => reciprocal(&a.preimage_function(f)),
        Target::Infinity => f.clone(),
    };
    Ok((characteristic_at(&g, r, nodes)? - t, t))
}

/// Largest `|log |f(z+η)/f(z)||` seen on a circle against `r^{σ−1+ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandCheck {
    pub max_excursion: f64,
    pub bound: f64,
}

impl BandCheck {
    pub fn holds(&self) -> bool {
        self.max_excursion <= self.bound
    }
}

/// Samples `|f(z+η)/f(z)|` on `|z| = r` and compares with `exp(±r^{σ−1+ε})`.
pub fn shift_ratio_band(
    f: &Expr,
    eta: Complex64,
    sigma: f64,
    eps: f64,
    r: f64,
    samples: usize,
) -> Result<BandCheck> {
    if samples == 0 || !(r > 0.0) {
        return Err(Error::invalid("need r > 0 and at least one sample"));
    }
    let shifted = f.shift(eta);
    let idx: Vec<usize> = (0..samples).collect();
    let logs = par_map(&idx, |&k| {
        let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / samples as f64);
        match (shifted.eval_log(z), f.eval_log(z)) {
            (LogOutcome::Value(LogValue::Log(a)), LogOutcome::Value(LogValue::Log(b))) => {
                Some((a.re - b.re).abs())
            }
            _ => None,
        }
    });
    let vals: Vec<f64> = logs.into_iter().flatten().collect();
    if vals.is_empty() {
        return Err(Error::AllSamplesSingular { count: samples });
    }
    Ok(BandCheck {
        max_excursion: vals.into_iter().fold(0.0, f64::max),
        bound: r.powf(sigma - 1.0 + eps),
    })
}
