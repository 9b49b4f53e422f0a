//! Exact linear systems over the rationals by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// Solution set `particular + span(kernel)` of `M x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<Rational>>,
    pub kernel: Vec<Vec<Rational>>,
}

fn to_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = row.iter().map(|c| (c * &lcm).to_integer()).collect();
    remove_content(ints)
}

fn remove_content(row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        row
    } else {
        row.into_iter().map(|c| c / &g).collect()
    }
}

/// Solves `matrix · x = rhs` exactly. Rows are scaled to primitive integer
/// vectors and reduced Gauss–Jordan style with cross-multiplication, dividing
/// out the row content after every update.
pub fn solve_affine(matrix: &[Vec<Rational>], rhs: &[Rational]) -> AffineSolution {
    assert_eq!(matrix.len(), rhs.len(), "one right-hand side per row");
    let ncols = matrix.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            let mut full = r.clone();
            full.push(b.clone());
            to_integer_row(&full)
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let g = pivot_row[col].gcd(&row[col]);
            let a = &pivot_row[col] / &g;
            let b = &row[col] / &g;
            let updated = row.iter().zip(&pivot_row).map(|(x, y)| x * &a - y * &b).collect();
            *row = remove_content(updated);
        }
        pivots.push(col);
        rank += 1;
    }

    let consistent = rows[rank..].iter().all(|r| r[ncols].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = Rational::new(rows[i][ncols].clone(), rows[i][c].clone());
        }
        x
    });
    let kernel = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -Rational::new(rows[i][free].clone(), rows[i][c].clone());
            }
            v
        })
        .collect();
    AffineSolution { particular, kernel }
}

/// `matrix · x` in exact arithmetic.
pub fn mat_vec(matrix: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    matrix.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub(crate) fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(|c| c.is_zero())
}
