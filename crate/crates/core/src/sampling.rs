//! Seeded randomness: orthonormal frames, block-orthogonal transforms and
//! small exact samples.
//!
//! All streams come from ChaCha8 seeded with `seed_from_u64`; independent
//! sub-streams use ChaCha's stream parameter so that sample `k` of a run does
//! not depend on how many samples precede it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{identity, inverse, matmul, Matrix};
use crate::scalar::{GaussianRational, Rational, RealScalar, Scalar};

/// Name of the generator recorded in reports.
pub const PRNG_NAME: &str = "chacha8-rand_chacha-0.9";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream `stream` of the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Exact orthogonal matrix by the Cayley transform `(I - A)(I + A)^{-1}` of
/// a random skew matrix with entries in `{-1, 0, 1}`.
pub fn cayley_orthogonal(n: usize, rng: &mut impl Rng) -> Matrix<Rational> {
    let mut a = vec![vec![Rational::from_int(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::from_int(rng.random_range(-1..=1));
            a[i][j] = v;
            a[j][i] = -v;
        }
    }
    let id: Matrix<Rational> = identity(n);
    let minus: Matrix<Rational> = (0..n)
        .map(|i| (0..n).map(|j| id[i][j] - a[i][j]).collect())
        .collect();
    let plus: Matrix<Rational> = (0..n)
        .map(|i| (0..n).map(|j| id[i][j] + a[i][j]).collect())
        .collect();
    // I + A is invertible for every real skew A
    let inv = inverse(&plus).expect("I + A is nonsingular for skew A");
    matmul(&minus, &inv)
}

/// Orthonormal columns by Gram-Schmidt on Gaussian samples.
pub fn gram_schmidt_orthogonal(n: usize, rng: &mut impl Rng) -> Matrix<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= d * ci;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// Orthogonal matrix in the field of `F`: exact Cayley for exact fields,
/// Gram-Schmidt for floats.
pub fn orthogonal_matrix<F: RealScalar>(n: usize, rng: &mut impl Rng) -> Matrix<F> {
    if F::is_exact() {
        cayley_orthogonal(n, rng)
            .into_iter()
            .map(|row| row.into_iter().map(F::from_rational).collect())
            .collect()
    } else {
        gram_schmidt_orthogonal(n, rng)
            .into_iter()
            .map(|row| row.into_iter().map(F::from_f64).collect())
            .collect()
    }
}

/// Two orthonormal vectors: the first two columns of a random orthogonal
/// matrix.
pub fn orthonormal_pair<F: RealScalar>(n: usize, rng: &mut impl Rng) -> (Vec<F>, Vec<F>) {
    let q = orthogonal_matrix::<F>(n, rng);
    let col = |j: usize| q.iter().map(|row| row[j]).collect::<Vec<F>>();
    (col(0), col(1))
}

/// `diag(O1, O2)` with independent orthogonal blocks of sizes `d1`, `d2`.
pub fn block_orthogonal<F: RealScalar>(d1: usize, d2: usize, rng: &mut impl Rng) -> Matrix<F> {
    let n = d1 + d2;
    let o1 = orthogonal_matrix::<F>(d1, rng);
    let o2 = orthogonal_matrix::<F>(d2, rng);
    let mut m = vec![vec![F::zero(); n]; n];
    for i in 0..d1 {
        for j in 0..d1 {
            m[i][j] = o1[i][j];
        }
    }
    for a in 0..d2 {
        for b in 0..d2 {
            m[d1 + a][d1 + b] = o2[a][b];
        }
    }
    m
}

/// Small rational `p/q` with `|p| <= 3`, `1 <= q <= 3`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-3..=3), rng.random_range(1..=3))
}

/// Small Gaussian rational with a small rational real part and an integer
/// imaginary part in `[-2, 2]`.
pub fn small_gaussian(rng: &mut impl Rng) -> GaussianRational {
    GaussianRational::new(small_rational(rng), Rational::from_int(rng.random_range(-2..=2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::transpose;

    #[test]
    fn cayley_is_exactly_orthogonal() {
        let mut r = rng(11);
        for n in [2, 3, 5, 7] {
            let q = cayley_orthogonal(n, &mut r);
            assert_eq!(matmul(&transpose(&q), &q), identity(n));
        }
    }

    #[test]
    fn gram_schmidt_is_orthogonal() {
        let q = gram_schmidt_orthogonal(6, &mut rng(3));
        let p = matmul(&transpose(&q), &q);
        let id: Matrix<f64> = identity(6);
        for i in 0..6 {
            for j in 0..6 {
                assert!((p[i][j] - id[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(5, 1).random();
        let b: u64 = stream_rng(5, 1).random();
        let c: u64 = stream_rng(5, 2).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
