//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity clustering.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::Poly;
use crate::error::{Error, Result};
use crate::format::round12;
use crate::scalar::{is_finite, to_c64, Real};
use crate::ComplexPoly;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
const MAX_ITERATIONS: usize = 800;

/// Roots with multiplicities, sorted by `(|ρ|, arg ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<F = f64> {
    pub roots: Vec<(Complex<F>, usize)>,
    pub converged: bool,
    pub iterations: usize,
    /// Clusters whose multiplicity could not be confirmed from derivatives.
    pub warnings: Vec<String>,
}

impl<F: Real> RootSet<F> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn multiplicity_of(&self, w: Complex<F>, tol: F) -> usize {
        self.roots.iter().filter(|(r, _)| (*r - w).norm() <= tol).map(|(_, m)| m).sum()
    }
}

/// Roots of `p` clustered at `cluster_tol`; fails on degree < 1 or when the
/// iteration does not converge (the partial set rides along in the error).
pub fn roots(p: &ComplexPoly, cluster_tol: f64) -> Result<RootSet> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::invalid("root finding needs degree >= 1"));
    }
    if !(cluster_tol > 0.0) {
        return Err(Error::invalid("cluster tolerance must be positive"));
    }
    let rs = find_roots(p, cluster_tol);
    if !rs.converged {
        return Err(Error::NoConvergence { iterations: rs.iterations, partial: rs });
    }
    Ok(rs)
}

/// Generic driver; never fails, `converged` reports the iteration outcome.
pub fn find_roots<F: Real>(p: &Poly<Complex<F>>, cluster_tol: F) -> RootSet<F> {
    let coeffs = p.coeffs();
    let mut out = RootSet { roots: Vec::new(), converged: true, iterations: 0, warnings: Vec::new() };
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.roots.push((Complex::zero(), zeros));
    }
    let q = Poly::new(coeffs[zeros.min(coeffs.len())..].to_vec());
    match q.degree() {
        None | Some(0) => {}
        Some(1) => {
            let r = -q.coeff(0) / q.coeff(1);
            out.roots.push((r, 1));
        }
        Some(_) => {
            let (approx, iterations, converged) = aberth(&q);
            out.iterations = iterations;
            out.converged = converged;
            let idx: Vec<usize> = (0..approx.len()).collect();
            let level = F::lit(1e-2);
            cluster(&q, &approx, idx, level, cluster_tol, &mut out);
        }
    }
    for (r, _) in out.roots.iter_mut() {
        if r.im.abs() <= F::lit(1e-14) * r.norm() {
            r.im = F::zero();
        }
        if r.re.abs() <= F::lit(1e-14) * r.norm() {
            r.re = F::zero();
        }
    }
    out.roots.sort_by(|a, b| {
        let ka = (round12(to_c64(a.0).norm()), to_c64(a.0).arg());
        let kb = (round12(to_c64(b.0).norm()), to_c64(b.0).arg());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Value, derivative and a rounding-error bound for `p(z)` by Horner's rule.
fn horner<F: Real>(c: &[Complex<F>], z: Complex<F>) -> (Complex<F>, Complex<F>, F) {
    let mut v = Complex::zero();
    let mut d = Complex::zero();
    let mut mag = F::zero();
    let az = z.norm();
    for a in c.iter().rev() {
        d = d * z + v;
        v = v * z + *a;
        mag = mag * az + a.norm();
    }
    let n = F::lit(c.len() as f64);
    (v, d, F::epsilon() * (F::lit(4.0) * n + F::lit(2.0)) * mag)
}

fn aberth<F: Real>(q: &Poly<Complex<F>>) -> (Vec<Complex<F>>, usize, bool) {
    let c = q.coeffs();
    let n = c.len() - 1;
    let radius = (c[0].norm() / c[n].norm()).powf(F::one() / F::lit(n as f64));
    let radius = if radius.is_finite() && radius > F::zero() { radius } else { F::one() };
    let mut z: Vec<Complex<F>> = (0..n)
        .map(|k| {
            let theta = F::TAU() * F::lit(k as f64) / F::lit(n as f64) + F::lit(0.4);
            Complex::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];
    for it in 0..MAX_ITERATIONS {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, d, bound) = horner(c, z[k]);
            if v.norm() <= bound {
                done[k] = true;
                continue;
            }
            all = false;
            let ratio = v / d;
            let mut s = Complex::zero();
            for j in 0..n {
                if j != k {
                    let diff = z[k] - z[j];
                    if !diff.is_zero() {
                        s = s + Complex::<F>::one() / diff;
                    }
                }
            }
            let w = ratio / (Complex::<F>::one() - ratio * s);
            if !is_finite(w) {
                // stationary point of p or coincident iterates: nudge off it
                z[k] = z[k] * Complex::new(F::one(), F::lit(1e-3)) + Complex::new(F::lit(1e-3), F::zero());
                continue;
            }
            z[k] = z[k] - w;
            if w.norm() <= F::lit(4.0) * F::epsilon() * z[k].norm() {
                done[k] = true;
            }
        }
        if all {
            return (z, it + 1, true);
        }
    }
    (z, MAX_ITERATIONS, false)
}

fn binomial_shift_abs<F: Real>(q: &Poly<Complex<F>>, c: Complex<F>) -> Poly<F> {
    Poly::new(q.coeffs().iter().map(|a| a.norm()).collect()).shift(&c.norm())
}

fn newton_polish<F: Real>(p: &Poly<Complex<F>>, start: Complex<F>) -> Complex<F> {
    if p.degree().unwrap_or(0) == 0 {
        return start;
    }
    let mut z = start;
    let (mut v, mut d, _) = horner(p.coeffs(), z);
    for _ in 0..30 {
        if v.is_zero() || d.is_zero() {
            break;
        }
        let next = z - v / d;
        let (nv, nd, _) = horner(p.coeffs(), next);
        if !is_finite(next) || nv.norm() >= v.norm() {
            break;
        }
        z = next;
        v = nv;
        d = nd;
    }
    z
}

/// Single-linkage components of `idx` at distance `tau` (scaled by magnitude).
fn components<F: Real>(approx: &[Complex<F>], idx: &[usize], tau: F) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..idx.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let (za, zb) = (approx[idx[a]], approx[idx[b]]);
            let scale = F::one() + za.norm().max(zb.norm());
            if (za - zb).norm() <= tau * scale {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; idx.len()];
    for i in 0..idx.len() {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(idx[i]),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![idx[i]]);
            }
        }
    }
    groups
}

/// Checks that `c` is an `m`-fold root: relative Taylor coefficients below
/// order `m` are at resolution level and the `m`-th is not.
fn confirms_multiplicity<F: Real>(q: &Poly<Complex<F>>, c: Complex<F>, m: usize, tol: F) -> (bool, bool) {
    let taylor = q.shift(&c);
    let scale = binomial_shift_abs(q, c);
    let n = F::lit(q.coeffs().len() as f64);
    let floor = F::epsilon() * F::lit(64.0) * n;
    let local = tol * c.norm().max(F::one());
    let low_ok = (0..m).all(|j| {
        let s = scale.coeff(j);
        let t = taylor.coeff(j).norm();
        s.is_zero() || t / s <= local.powi((m - j) as i32).max(floor)
    });
    let s = scale.coeff(m);
    let top_ok = !s.is_zero() && taylor.coeff(m).norm() / s >= F::lit(1e-4);
    (low_ok, top_ok)
}

fn cluster<F: Real>(
    q: &Poly<Complex<F>>,
    approx: &[Complex<F>],
    idx: Vec<usize>,
    tau: F,
    tol: F,
    out: &mut RootSet<F>,
) {
    for group in components(approx, &idx, tau) {
        let m = group.len();
        if m == 1 {
            out.roots.push((newton_polish(q, approx[group[0]]), 1));
            continue;
        }
        let mean = group.iter().fold(Complex::zero(), |acc, &i| acc + approx[i]) / F::lit(m as f64);
        let mut dm = q.clone();
        for _ in 0..m - 1 {
            dm = dm.derivative();
        }
        let mut centre = newton_polish(&dm, mean);
        if (centre - mean).norm() > tau * (F::one() + mean.norm()) {
            centre = mean;
        }
        let (low_ok, top_ok) = confirms_multiplicity(q, centre, m, tol);
        if low_ok {
            if !top_ok {
                out.warnings.push(format!(
                    "multiplicity {m} at {} is near-degenerate",
                    crate::format::format_complex(to_c64(centre))
                ));
            }
            out.roots.push((centre, m));
        } else if tau > tol {
            let next = (tau / F::lit(10.0)).max(tol);
            cluster(q, approx, group, next, tol, out);
        } else {
            out.warnings.push(format!(
                "{m} approximations within the cluster tolerance near {} merged without confirmation",
                crate::format::format_complex(to_c64(centre))
            ));
            out.roots.push((centre, m));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn real_poly(c: &[f64]) -> ComplexPoly {
        Poly::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[test]
    fn factorable_quadratic() {
        let rs = roots(&real_poly(&[2.0, -3.0, 1.0]), 1e-6).unwrap();
        assert_eq!(rs.len(), 2);
        assert!((rs.roots[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((rs.roots[1].0 - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(rs.roots.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn perfect_square() {
        let rs = roots(&real_poly(&[1.0, -2.0, 1.0]), 1e-6).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].1, 2);
        assert!((rs.roots[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn zero_root_deflated_exactly() {
        // (w-1)^2 - 1 = w^2 - 2w
        let rs = roots(&real_poly(&[0.0, -2.0, 1.0]), 1e-6).unwrap();
        assert_eq!(rs.roots, vec![(Complex64::new(0.0, 0.0), 1), (Complex64::new(2.0, 0.0), 1)]);
    }

    #[test]
    fn powers_of_linear_factor() {
        for k in 1..=5u32 {
            let p = Poly::linear_root(Complex64::new(1.0, 0.0)).pow(k);
            let rs = roots(&p, 1e-6).unwrap();
            assert_eq!(rs.roots.len(), 1, "k = {k}: {:?}", rs.roots);
            assert_eq!(rs.roots[0].1, k as usize);
            assert!((rs.roots[0].0 - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn conjugate_pair_order() {
        let rs = roots(&real_poly(&[1.0, 0.0, 1.0]), 1e-6).unwrap();
        assert!((rs.roots[0].0 - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((rs.roots[1].0 - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn single_precision() {
        let p: Poly<Complex<f32>> =
            Poly::new(vec![Complex::new(6.0f32, 0.0), Complex::new(-5.0, 0.0), Complex::new(1.0, 0.0)]);
        let rs = find_roots(&p, 1e-3f32);
        assert!(rs.converged);
        assert!((rs.roots[0].0.re - 2.0).abs() < 1e-4);
        assert!((rs.roots[1].0.re - 3.0).abs() < 1e-4);
    }

    #[test]
    fn constant_rejected() {
        assert!(roots(&real_poly(&[3.0]), 1e-6).is_err());
    }
}
