//! Deterministic sample sets and order-stable reductions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_SAMPLE_COUNT: usize = 100;
pub const DEFAULT_SAMPLE_RADIUS: f64 = 5.0;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `n` sunflower points filling the disk `|z| <= radius` evenly.
pub fn disk_points(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let rho = radius * ((k as f64 + 0.5) / n as f64).sqrt();
            Complex64::from_polar(rho, k as f64 * GOLDEN_ANGLE)
        })
        .collect()
}

/// `n` uniform random points in the disk, reproducible from `seed`.
pub fn random_disk_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let rho = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(rho, rng.gen::<f64>() * std::f64::consts::TAU)
        })
        .collect()
}

/// `n` points of the additive R2 sequence in the rectangle
/// `[re.0, re.1] x [im.0, im.1]`.
pub fn rect_points(n: usize, re: (f64, f64), im: (f64, f64)) -> Vec<Complex64> {
    // inverse powers of the plastic number
    let (a1, a2) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_3);
    (0..n)
        .map(|k| {
            let u = (0.5 + a1 * (k + 1) as f64).fract();
            let v = (0.5 + a2 * (k + 1) as f64).fract();
            Complex64::new(re.0 + u * (re.1 - re.0), im.0 + v * (im.1 - im.0))
        })
        .collect()
}

/// Parallel map that keeps input order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Pairwise (cascade) summation; the grouping depends only on the length, so
/// results are reproducible however the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_points_stay_inside() {
        let pts = disk_points(100, 5.0);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|z| z.norm() <= 5.0));
        assert!(pts.iter().any(|z| z.norm() > 4.5));
        assert!(pts.iter().any(|z| z.norm() < 0.5));
    }

    #[test]
    fn seeded_points_reproduce() {
        assert_eq!(random_disk_points(10, 2.0, 7), random_disk_points(10, 2.0, 7));
        assert_ne!(random_disk_points(10, 2.0, 7), random_disk_points(10, 2.0, 8));
    }

    #[test]
    fn rect_points_cover_rectangle() {
        let pts = rect_points(50, (1.0, 6.0), (-2.0, 2.0));
        assert!(pts.iter().all(|z| (1.0..=6.0).contains(&z.re) && (-2.0..=2.0).contains(&z.im)));
        assert!(pts.iter().any(|z| z.re < 2.0) && pts.iter().any(|z| z.re > 5.0));
    }

    #[test]
    fn pairwise_sum_matches_exact_integers() {
        let xs: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
