//! Value sharing inside a disk.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::expr::Expr;
use crate::format::{fmt_g, format_complex};
use crate::nevanlinna::{count_zeros, Target, ZeroList};
use crate::{Error, Result};

pub const DEFAULT_PAIR_TOL: f64 = 1e-6;

/// A zero of `f − a` matched with a zero of `g − a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub f_point: Complex64,
    pub g_point: Complex64,
    pub f_multiplicity: usize,
    pub g_multiplicity: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharingVerdict {
    pub value: Target,
    pub radius: f64,
    pub pairs: Vec<Pair>,
    pub unmatched_f: Vec<(Complex64, usize)>,
    pub unmatched_g: Vec<(Complex64, usize)>,
    /// Shared counting multiplicities, within `|z| < radius`.
    pub cm: bool,
    /// Shared ignoring multiplicities, within `|z| < radius`.
    pub im: bool,
}

impl SharingVerdict {
    pub fn to_json(&self) -> Value {
        let pts = |v: &[(Complex64, usize)]| {
            v.iter()
                .map(|(z, m)| json!({"location": format_complex(*z), "multiplicity": m}))
                .collect::<Vec<_>>()
        };
        json!({
            "value": self.value.to_string(),
            "radius": self.radius,
            "cm": self.cm,
            "im": self.im,
            "pairs": self.pairs.iter().map(|p| json!({
                "f": format_complex(p.f_point),
                "g": format_complex(p.g_point),
                "f_multiplicity": p.f_multiplicity,
                "g_multiplicity": p.g_multiplicity,
                "distance": p.distance,
            })).collect::<Vec<_>>(),
            "unmatched_f": pts(&self.unmatched_f),
            "unmatched_g": pts(&self.unmatched_g),
        })
    }

    /// Plain-text table of the pairing.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "value {}  |z| < {}  CM {}  IM {}\n",
            self.value,
            fmt_g(self.radius, 6),
            self.cm,
            self.im
        );
        out.push_str(&format!("{:<28} {:<28} {:>5} {:>5} {:>10}\n", "zero of f-a", "zero of g-a", "m_f", "m_g", "dist"));
        for p in &self.pairs {
            out.push_str(&format!(
                "{:<28} {:<28} {:>5} {:>5} {:>10}\n",
                format_complex(p.f_point),
                format_complex(p.g_point),
                p.f_multiplicity,
                p.g_multiplicity,
                fmt_g(p.distance, 3)
            ));
        }
        for (z, m) in &self.unmatched_f {
            out.push_str(&format!("{:<28} {:<28} {:>5} {:>5}\n", format_complex(*z), "-", m, "-"));
        }
        for (z, m) in &self.unmatched_g {
            out.push_str(&format!("{:<28} {:<28} {:>5} {:>5}\n", "-", format_complex(*z), "-", m));
        }
        out
    }
}

fn check_separated(list: &ZeroList, pair_tol: f64, which: &str) -> Result<()> {
    for (i, a) in list.zeros.iter().enumerate() {
        for b in &list.zeros[i + 1..] {
            if (a.0 - b.0).norm() < 2.0 * pair_tol {
                return Err(Error::AmbiguousPairing(format!(
                    "zeros {} and {} of {which} are closer than 2·pair_tol",
                    format_complex(a.0),
                    format_complex(b.0)
                )));
            }
        }
    }
    Ok(())
}

fn zero_lists(f: &Expr, g: &Expr, r: f64) -> Result<(ZeroList, ZeroList)> {
    let (mut zf, mut zg) = rayon::join(|| count_zeros(f, r), || count_zeros(g, r));
    // Both lists must refer to the same disk; boundary nudging may have
    // enlarged one of them.
    for _ in 0..3 {
        let (a, b) = (zf.as_ref().map_err(Clone::clone)?, zg.as_ref().map_err(Clone::clone)?);
        if a.radius == b.radius {
            break;
        }
        let rr = a.radius.max(b.radius);
        if a.radius < rr {
            zf = count_zeros(f, rr);
        } else {
            zg = count_zeros(g, rr);
        }
    }
    let (zf, zg) = (zf?, zg?);
    if zf.radius != zg.radius {
        return Err(Error::Contour("could not agree on a common disk radius".into()));
    }
    Ok((zf, zg))
}

/// Whether `f` and `g` share the value `a` in `|z| < r`.
pub fn shares_value(f: &Expr, g: &Expr, a: Target, r: f64, pair_tol: f64) -> Result<SharingVerdict> {
    if !(pair_tol > 0.0) {
        return Err(Error::invalid("pair_tol must be positive"));
    }
    let (fa, ga) = (a.preimage_function(f), a.preimage_function(g));
    let (zf, zg) = zero_lists(&fa, &ga, r)?;
    check_separated(&zf, pair_tol, "f − a")?;
    check_separated(&zg, pair_tol, "g − a")?;

    let mut taken = vec![false; zg.zeros.len()];
    let mut pairs = Vec::new();
    let mut unmatched_f = Vec::new();
    for &(p, m) in &zf.zeros {
        let best = zg
            .zeros
            .iter()
            .enumerate()
            .filter(|(j, q)| !taken[*j] && (q.0 - p).norm() <= pair_tol)
            .min_by(|x, y| (x.1 .0 - p).norm().total_cmp(&(y.1 .0 - p).norm()));
        match best {
            Some((j, &(q, mq))) => {
                taken[j] = true;
                pairs.push(Pair {
                    f_point: p,
                    g_point: q,
                    f_multiplicity: m,
                    g_multiplicity: mq,
                    distance: (q - p).norm(),
                });
            }
            None => unmatched_f.push((p, m)),
        }
    }
    let unmatched_g: Vec<_> =
        zg.zeros.iter().zip(&taken).filter(|(_, t)| !**t).map(|(z, _)| *z).collect();
    let im = unmatched_f.is_empty() && unmatched_g.is_empty();
    let cm = im && pairs.iter().all(|p| p.f_multiplicity == p.g_multiplicity);
    Ok(SharingVerdict { value: a, radius: zf.radius, pairs, unmatched_f, unmatched_g, cm, im })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        crate::expr::parse(s).unwrap()
    }

    #[test]
    fn sine_and_its_double_share_zero_cm() {
        let v = shares_value(&parse("sin(z)"), &parse("2*sin(z)"), Target::zero(), 10.0, DEFAULT_PAIR_TOL).unwrap();
        assert!(v.cm && v.im);
        assert_eq!(v.pairs.len(), 7);
    }

    #[test]
    fn squaring_breaks_cm_but_not_im() {
        let v = shares_value(&parse("sin(z)"), &parse("sin(z)^2"), Target::zero(), 10.0, DEFAULT_PAIR_TOL).unwrap();
        assert!(!v.cm && v.im);
        assert!(v.pairs.iter().all(|p| p.f_multiplicity == 1 && p.g_multiplicity == 2));
    }

    #[test]
    fn zero_free_pair_shares_vacuously() {
        let e = std::f64::consts::E;
        let g = parse(&format!("{}*exp(z)", e - 1.0));
        let v = shares_value(&parse("exp(z)"), &g, Target::zero(), 20.0, DEFAULT_PAIR_TOL).unwrap();
        assert!(v.cm && v.pairs.is_empty());
    }

    #[test]
    fn poles_shared_through_infinity() {
        let v = shares_value(&parse("1/(z-1)"), &parse("z/(z-1)"), Target::Infinity, 3.0, DEFAULT_PAIR_TOL).unwrap();
        assert!(v.cm);
        assert_eq!(v.pairs.len(), 1);
    }

    #[test]
    fn unshared_values_are_reported() {
        let v = shares_value(&parse("z-1"), &parse("z+1"), Target::zero(), 3.0, DEFAULT_PAIR_TOL).unwrap();
        assert!(!v.im && !v.cm);
        assert_eq!(v.unmatched_f.len(), 1);
        assert_eq!(v.unmatched_g.len(), 1);
    }
}
