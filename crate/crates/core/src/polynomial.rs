//! The quartic `X -> Tr(R_X^2)` as an explicit polynomial.
//!
//! `Tr(R_X^2) = sum_{pqrs} x_p x_q x_r x_s T_{pqrs}` with
//! `T_{pqrs} = sum_{uv} R(u,p,v,q) R(u,r,v,s)`. The coefficient of a monomial
//! is the sum of `T` over the distinct orderings of its index multiset.

use std::collections::BTreeMap;

use crate::scalar::Scalar;
use crate::tensor::CurvatureTensor;

/// Sorted index multiset of a degree-4 monomial.
pub type Monomial = [usize; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForm<F> {
    dim: usize,
    coeffs: BTreeMap<Monomial, F>,
}

pub fn sorted(mut m: Monomial) -> Monomial {
    m.sort_unstable();
    m
}

/// Number of distinct orderings of a multiset of four indices.
pub fn multiplicity(m: &Monomial) -> usize {
    let m = sorted(*m);
    let mut counts = Vec::new();
    let mut run = 1;
    for w in m.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            counts.push(run);
            run = 1;
        }
    }
    counts.push(run);
    let fact = |k: usize| (1..=k).product::<usize>();
    24 / counts.into_iter().map(fact).product::<usize>()
}

impl<F: Scalar> QuarticForm<F> {
    /// Extracts the coefficients of `Tr(R_X^2)`.
    pub fn trace_jacobi_squared(r: &CurvatureTensor<F>) -> Self {
        let n = r.dim();
        let mut coeffs: BTreeMap<Monomial, F> = BTreeMap::new();
        // A[(p,q)][(u,v)] = R(u,p,v,q); T_pqrs = <A_pq, A_rs>
        let slices: Vec<Vec<F>> = (0..n * n)
            .map(|pq| {
                let (p, q) = (pq / n, pq % n);
                (0..n * n).map(|uv| r.get(uv / n, p, uv % n, q)).collect()
            })
            .collect();
        for pq in 0..n * n {
            for rs in 0..n * n {
                let t = F::sum_iter(slices[pq].iter().zip(&slices[rs]).map(|(&a, &b)| a * b));
                if t.is_zero() {
                    continue;
                }
                let key = sorted([pq / n, pq % n, rs / n, rs % n]);
                let slot = coeffs.entry(key).or_insert_with(F::zero);
                *slot = *slot + t;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        QuarticForm { dim: n, coeffs }
    }

    /// `(sum_p x_p^2)^2`.
    pub fn norm_fourth(dim: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        for p in 0..dim {
            coeffs.insert([p, p, p, p], F::one());
            for q in p + 1..dim {
                coeffs.insert([p, p, q, q], F::from_int(2));
            }
        }
        QuarticForm { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of the monomial with the given indices (any order).
    pub fn coeff(&self, m: Monomial) -> F {
        self.coeffs.get(&sorted(m)).copied().unwrap_or_else(F::zero)
    }

    /// Component of the fully symmetric 4-linear form (the polarization).
    pub fn polarized(&self, m: Monomial) -> F {
        self.coeff(m) / F::from_int(multiplicity(&m) as i64)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.coeffs.iter()
    }

    pub fn eval(&self, x: &[F]) -> F {
        F::sum_iter(
            self.coeffs
                .iter()
                .map(|(m, &c)| c * x[m[0]] * x[m[1]] * x[m[2]] * x[m[3]]),
        )
    }

    /// Every sorted monomial of degree 4 in `dim` variables.
    pub fn monomials(dim: usize) -> impl Iterator<Item = Monomial> {
        (0..dim).flat_map(move |a| {
            (a..dim).flat_map(move |b| {
                (b..dim).flat_map(move |c| (c..dim).map(move |d| [a, b, c, d]))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&[0, 0, 0, 0]), 1);
        assert_eq!(multiplicity(&[0, 0, 0, 1]), 4);
        assert_eq!(multiplicity(&[0, 0, 1, 1]), 6);
        assert_eq!(multiplicity(&[0, 0, 1, 2]), 12);
        assert_eq!(multiplicity(&[3, 1, 2, 0]), 24);
    }

    #[test]
    fn constant_curvature_quartic_is_multiple_of_norm() {
        let k = Rational::new(3, 2);
        let r = CurvatureTensor::constant_curvature(4, k).unwrap();
        let f = QuarticForm::trace_jacobi_squared(&r);
        let h = Rational::from_int(3) * k * k;
        let norm = QuarticForm::<Rational>::norm_fourth(4);
        for m in QuarticForm::<Rational>::monomials(4) {
            assert_eq!(f.coeff(m), h * norm.coeff(m), "{m:?}");
        }
    }

    #[test]
    fn evaluation_matches_jacobi_trace() {
        let r = CurvatureTensor::constant_curvature(3, Rational::from_int(2)).unwrap();
        let f = QuarticForm::trace_jacobi_squared(&r);
        let x = [Rational::new(1, 2), Rational::from_int(-1), Rational::new(2, 3)];
        assert_eq!(f.eval(&x), r.trace_jacobi_squared(&x));
    }
}
