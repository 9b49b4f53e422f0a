//! Complex Γ, log Γ and polygamma functions.
//!
//! Γ uses the Lanczos approximation with `g = 7` and nine coefficients
//! (relative error near 1e-15 for `Re z >= 1/2`) and the reflection formula on
//! the left half-plane. Polygamma functions shift the argument to `Re z >= 15`
//! with the recurrence `ψ⁽ᵏ⁾(z) = ψ⁽ᵏ⁾(z+1) - (-1)^k k! / z^{k+1}` and then sum
//! the asymptotic Bernoulli series.

use num_complex::Complex;

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Even-index Bernoulli numbers B_2 .. B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// True when `z` is (numerically) a non-positive integer, where Γ has poles.
pub fn is_nonpositive_integer<F: Real>(z: Complex<F>) -> bool {
    z.im == F::zero() && z.re <= F::zero() && z.re == z.re.round()
}

fn lanczos_sum<F: Real>(zm1: Complex<F>) -> Complex<F> {
    let mut x = Complex::new(F::lit(LANCZOS_COEFFS[0]), F::zero());
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x = x + Complex::new(F::lit(c), F::zero()) / (zm1 + F::lit(i as f64));
    }
    x
}

/// Γ(z). Returns `None` at the poles `z = 0, -1, -2, ...`.
pub fn gamma<F: Real>(z: Complex<F>) -> Option<Complex<F>> {
    if is_nonpositive_integer(z) {
        return None;
    }
    let half = F::lit(0.5);
    if z.re < half {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let pi = F::PI();
        let s = (z * pi).sin();
        let g = gamma(Complex::new(F::one(), F::zero()) - z)?;
        return Some(Complex::new(pi, F::zero()) / (s * g));
    }
    let zm1 = z - F::one();
    let t = zm1 + F::lit(LANCZOS_G) + half;
    let x = lanczos_sum(zm1);
    let sqrt_two_pi = F::TAU().sqrt();
    Some(t.powc(zm1 + half) * (-t).exp() * x * sqrt_two_pi)
}

/// log Γ(z), correct modulo 2πi. Returns `None` at the poles.
pub fn ln_gamma<F: Real>(z: Complex<F>) -> Option<Complex<F>> {
    if is_nonpositive_integer(z) {
        return None;
    }
    let half = F::lit(0.5);
    if z.re < half {
        let pi = F::PI();
        let one = Complex::new(F::one(), F::zero());
        let ls = log_sin(z * pi)?;
        let lg = ln_gamma(one - z)?;
        return Some(Complex::new(pi.ln(), F::zero()) - ls - lg);
    }
    let zm1 = z - F::one();
    let t = zm1 + F::lit(LANCZOS_G) + half;
    let x = lanczos_sum(zm1);
    let ln_sqrt_two_pi = half * F::TAU().ln();
    Some((zm1 + half) * t.ln() - t + x.ln() + ln_sqrt_two_pi)
}

/// log sin(z) modulo 2πi, stable for large `|Im z|`. `None` when sin z = 0.
pub fn log_sin<F: Real>(z: Complex<F>) -> Option<Complex<F>> {
    let limit = F::lit(30.0);
    let i = Complex::new(F::zero(), F::one());
    let ln_2i = Complex::new(F::lit(2.0), F::zero()).ln() + Complex::new(F::zero(), F::FRAC_PI_2());
    if z.im > limit {
        // sin z = e^{-iz} (e^{2iz} - 1) / (2i)
        let q = (i * z * F::lit(2.0)).exp();
        Some(-i * z + (q - F::one()).ln() - ln_2i)
    } else if z.im < -limit {
        // sin z = e^{iz} (1 - e^{-2iz}) / (2i)
        let q = (-i * z * F::lit(2.0)).exp();
        Some(i * z + (Complex::new(F::one(), F::zero()) - q).ln() - ln_2i)
    } else {
        let s = z.sin();
        if s == Complex::new(F::zero(), F::zero()) {
            None
        } else {
            Some(s.ln())
        }
    }
}

/// log cos(z) modulo 2πi, stable for large `|Im z|`. `None` when cos z = 0.
pub fn log_cos<F: Real>(z: Complex<F>) -> Option<Complex<F>> {
    let limit = F::lit(30.0);
    let i = Complex::new(F::zero(), F::one());
    let ln2 = F::lit(2.0).ln();
    if z.im > limit {
        let q = (i * z * F::lit(2.0)).exp();
        Some(-i * z + (q + F::one()).ln() - ln2)
    } else if z.im < -limit {
        let q = (-i * z * F::lit(2.0)).exp();
        Some(i * z + (q + F::one()).ln() - ln2)
    } else {
        let c = z.cos();
        if c == Complex::new(F::zero(), F::zero()) {
            None
        } else {
            Some(c.ln())
        }
    }
}

/// tan(z) evaluated through `q = e^{±2iz}` so that large `|Im z|` stays finite.
///
/// Returns the value together with the magnitude of the denominator that
/// vanishes at the poles (`|cos z|` scaled to order one), so callers can flag
/// near-singular evaluations.
pub fn tan_with_denominator<F: Real>(z: Complex<F>) -> (Complex<F>, F) {
    let two = F::lit(2.0);
    let i = Complex::new(F::zero(), F::one());
    let one = Complex::new(F::one(), F::zero());
    if z.im.abs() <= F::lit(20.0) {
        let c = z.cos();
        return (z.sin() / c, c.norm());
    }
    if z.im > F::zero() {
        let q = (i * z * two).exp();
        let den = q + one;
        (-i * (q - one) / den, den.norm())
    } else {
        let q = (-i * z * two).exp();
        let den = one + q;
        (-i * (one - q) / den, den.norm())
    }
}

fn factorial<F: Real>(n: u32) -> F {
    (1..=n).fold(F::one(), |acc, k| acc * F::lit(k as f64))
}

/// The polygamma function ψ⁽ᵏ⁾(z); `k = 0` is the digamma function.
///
/// Returns `None` at the poles `z = 0, -1, -2, ...`.
pub fn polygamma<F: Real>(k: u32, z: Complex<F>) -> Option<Complex<F>> {
    if is_nonpositive_integer(z) {
        return None;
    }
    let mut z = z;
    let mut acc = Complex::new(F::zero(), F::zero());
    let sign = if k % 2 == 0 { -F::one() } else { F::one() };
    let kfact: F = factorial(k);
    let shift_to = F::lit(15.0);
    // ψ⁽ᵏ⁾(z) = ψ⁽ᵏ⁾(z+1) + (-1)^{k+1} k! / z^{k+1}
    while z.re < shift_to {
        acc = acc + z.powi(-(k as i32 + 1)) * (sign * kfact);
        z = z + F::one();
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let series = if k == 0 {
        // ln z - 1/(2z) - Σ B_{2j} / (2j z^{2j})
        let mut s = z.ln() - inv * F::lit(0.5);
        let mut p = inv2;
        for (j, &b) in BERNOULLI.iter().enumerate() {
            let two_j = F::lit(2.0 * (j as f64 + 1.0));
            s = s - p * (F::lit(b) / two_j);
            p = p * inv2;
        }
        s
    } else {
        // (-1)^{k+1} [ (k-1)!/z^k + k!/(2 z^{k+1}) + Σ B_{2j} (2j+k-1)!/((2j)! z^{2j+k}) ]
        let km1fact: F = factorial(k - 1);
        let zk = inv.powi(k as i32);
        let mut s = zk * km1fact + zk * inv * (kfact * F::lit(0.5));
        let mut p = zk * inv2;
        for (j, &b) in BERNOULLI.iter().enumerate() {
            let two_j = 2 * (j as u32 + 1);
            let num: F = factorial(two_j + k - 1);
            let den: F = factorial(two_j);
            s = s + p * (F::lit(b) * num / den);
            p = p * inv2;
        }
        s * sign
    };
    Some(acc + series)
}

pub fn digamma<F: Real>(z: Complex<F>) -> Option<Complex<F>> {
    polygamma(0, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_at_integers_is_factorial() {
        let mut fact = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!(rel(g, c(fact, 0.0)) < 1e-13, "Γ({n})");
            fact *= n as f64;
        }
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-12);
    }

    #[test]
    fn gamma_half_integers_and_reflection() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(sqrt_pi, 0.0)) < 1e-13);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * sqrt_pi, 0.0)) < 1e-13);
        assert!(gamma(c(0.0, 0.0)).is_none());
        assert!(gamma(c(-3.0, 0.0)).is_none());
    }

    #[test]
    fn gamma_functional_equation_off_axis() {
        for &z in &[c(0.3, 1.7), c(2.5, -3.0), c(-1.2, 0.8), c(6.0, 4.0)] {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "{z}");
        }
    }

    #[test]
    fn ln_gamma_matches_log_of_gamma() {
        for &z in &[c(3.3, 0.4), c(0.2, -2.0), c(-2.5, 1.0), c(10.0, 7.0)] {
            let a = ln_gamma(z).unwrap().exp();
            let b = gamma(z).unwrap();
            assert!(rel(a, b) < 1e-11, "{z}");
        }
        // far beyond the f64 range of Γ itself
        let big = ln_gamma(c(200.0, 0.0)).unwrap();
        let stirling = 199.5 * 200f64.ln() - 200.0 + 0.5 * std::f64::consts::TAU.ln() + 1.0 / 2400.0;
        assert!((big.re - stirling).abs() < 1e-9);
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(c(1.0, 0.0)).unwrap() - c(-euler, 0.0)).norm() < 1e-13);
        // ψ(5) = 1 + 1/2 + 1/3 + 1/4 - γ
        let h4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
        assert!((digamma(c(5.0, 0.0)).unwrap() - c(h4 - euler, 0.0)).norm() < 1e-13);
        // ψ(1/2) = -γ - 2 ln 2
        let v = -euler - 2.0 * 2f64.ln();
        assert!((digamma(c(0.5, 0.0)).unwrap() - c(v, 0.0)).norm() < 1e-13);
        // reflection-free evaluation on the left half-plane: ψ(1-z) - ψ(z) = π cot(πz)
        let z = c(-2.3, 0.7);
        let lhs = digamma(c(1.0, 0.0) - z).unwrap() - digamma(z).unwrap();
        let pi = std::f64::consts::PI;
        let rhs = (z * pi).cos() / (z * pi).sin() * pi;
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn trigamma_known_value() {
        // ψ'(1) = π²/6
        let pi = std::f64::consts::PI;
        let v = polygamma(1, c(1.0, 0.0)).unwrap();
        assert!((v - c(pi * pi / 6.0, 0.0)).norm() < 1e-12);
        // ψ''(1) = -2 ζ(3)
        let zeta3 = 1.202_056_903_159_594_3;
        let v = polygamma(2, c(1.0, 0.0)).unwrap();
        assert!((v - c(-2.0 * zeta3, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn log_sin_cos_agree_with_direct_evaluation() {
        for &z in &[c(0.4, 25.0), c(-1.0, -29.0), c(2.0, 0.5)] {
            assert!((log_sin(z).unwrap().exp() - z.sin()).norm() / z.sin().norm() < 1e-12);
            assert!((log_cos(z).unwrap().exp() - z.cos()).norm() / z.cos().norm() < 1e-12);
        }
        // |Im z| = 400 overflows sin itself but not its logarithm
        let l = log_sin(c(0.3, 400.0)).unwrap();
        assert!((l.re - (400.0 - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn tan_far_from_real_axis_is_finite() {
        let (t, _) = tan_with_denominator(c(1.0, 800.0));
        assert!((t - c(0.0, 1.0)).norm() < 1e-12);
        let (t, _) = tan_with_denominator(c(1.0, -800.0));
        assert!((t - c(0.0, -1.0)).norm() < 1e-12);
        let z = c(0.7, 25.0);
        let (t, _) = tan_with_denominator(z);
        assert!((t - z.sin() / z.cos()).norm() < 1e-12);
    }

    #[test]
    fn single_precision_gamma() {
        let g = gamma(num_complex::Complex32::new(5.0, 0.0)).unwrap();
        assert!((g.re - 24.0).abs() < 1e-3);
    }
}
