//! Small dense linear algebra over any scalar backend.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity<F: Scalar>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn matmul<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| F::sum_iter((0..inner).map(|k| row[k] * b[k][j])))
                .collect()
        })
        .collect()
}

pub fn transpose<F: Scalar>(a: &Matrix<F>) -> Matrix<F> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    F::sum_iter(a.iter().zip(b).map(|(&x, &y)| x * y))
}

/// Pivot choice: first nonzero entry for exact fields, largest modulus for
/// floats.
fn pivot_row<F: Scalar>(m: &Matrix<F>, col: usize, from: usize) -> Option<usize> {
    if F::is_exact() {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        (from..m.len())
            .filter(|&r| m[r][col].modulus() > 1e-14)
            .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()))
    }
}

/// Solves `a x = b` for square nonsingular `a` by Gauss-Jordan elimination.
pub fn solve<F: Scalar>(a: &Matrix<F>, b: &[F]) -> Result<Vec<F>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("solve needs a square system".into()));
    }
    let mut m: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let p = pivot_row(&m, col, col).ok_or(Error::SingularSystem)?;
        m.swap(col, p);
        let inv = F::one() / m[col][col];
        for v in m[col].iter_mut() {
            *v = *v * inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for c in col..=n {
                let delta = factor * m[col][c];
                m[r][c] = m[r][c] - delta;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n]).collect())
}

pub fn inverse<F: Scalar>(a: &Matrix<F>) -> Result<Matrix<F>> {
    let n = a.len();
    let columns = (0..n)
        .map(|j| {
            let e: Vec<F> = (0..n).map(|i| if i == j { F::one() } else { F::zero() }).collect();
            solve(a, &e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(transpose(&columns))
}

/// Rank by row reduction; exact for exact fields.
pub fn rank<F: Scalar>(a: &Matrix<F>) -> usize {
    let mut m = a.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = pivot_row(&m, col, r) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col] / m[r][col];
            for c in col..cols {
                let delta = factor * m[r][c];
                m[i][c] = m[i][c] - delta;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_symmetric_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return f64::INFINITY;
    }
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    m.symmetric_eigenvalues().min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i128) -> Rational {
        Rational::new(n, 1)
    }

    #[test]
    fn exact_solve() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4, 5), Rational::new(7, 5)]);
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(matches!(solve(&a, &[q(1), q(1)]), Err(Error::SingularSystem)));
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = vec![vec![q(1), q(2), q(0)], vec![q(0), q(1), q(4)], vec![q(5), q(6), q(0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(3));
    }

    #[test]
    fn eigenvalue_of_known_matrix() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        assert!((min_symmetric_eigenvalue(&a) - 1.0).abs() < 1e-12);
    }
}
