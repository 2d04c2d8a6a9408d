//! The sum of `Tr(cR_X^2)` over all permutations of the coordinates within
//! each block, directly and by the coefficient formula.

use itertools::Itertools;

use crate::conditions::BlockSplit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::CurvatureTensor;

use super::ledger::{require_block, FormLedger};
use super::symmetric::{abc_coefficients, ZVector};

/// Largest permutation count the direct sum will enumerate.
pub const DIRECT_GUARD: u128 = 10_000_000;

pub fn permutation_count(split: BlockSplit) -> u128 {
    let f = |n: usize| (1..=n as u128).product::<u128>();
    f(split.d1) * f(split.d2)
}

/// `sum over Sym(d1) x Sym(d2)` of `Tr(cR_{X^pi}^2)`.
pub fn symmetrized_trace_direct<F: Scalar>(cr: &CurvatureTensor<F>, z: &ZVector<F>) -> Result<F> {
    let split = z.split();
    require_block(cr, split)?;
    let count = permutation_count(split);
    if count > DIRECT_GUARD {
        return Err(Error::CombinatorialGuard {
            count,
            limit: DIRECT_GUARD,
        });
    }
    let (x, y) = (z.x(), z.y());
    let perms1: Vec<Vec<usize>> = (0..split.d1).permutations(split.d1).collect();
    let perms2: Vec<Vec<usize>> = (0..split.d2).permutations(split.d2).collect();
    let mut total = F::zero();
    let mut v = vec![F::zero(); split.n()];
    for p in &perms1 {
        for (slot, &src) in p.iter().enumerate() {
            v[slot] = x[src];
        }
        for q in &perms2 {
            for (slot, &src) in q.iter().enumerate() {
                v[split.d1 + slot] = y[src];
            }
            total = total + cr.trace_jacobi_squared(&v);
        }
    }
    Ok(total)
}

/// `sum A_h P_h + sum B_h Q_h + sum C_h S_h`.
pub fn symmetrized_trace_formula<F: Scalar>(ledger: &FormLedger<F>, z: &ZVector<F>) -> Result<F> {
    if ledger.split != z.split() {
        return Err(Error::Precondition("ledger and vector use different splits".into()));
    }
    let v = abc_coefficients(z);
    Ok(F::sum_iter(
        v.a.iter()
            .zip(&ledger.p)
            .chain(v.b.iter().zip(&ledger.q))
            .chain(v.c.iter().zip(&ledger.s))
            .map(|(&k, &f)| k * f),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::ledger::coefficient_forms;
    use crate::scalar::{GaussianRational, Rational, RealScalar};
    use crate::zoo;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(Rational::from_int(re), Rational::from_int(im))
    }

    #[test]
    fn zero_cases() {
        let split = BlockSplit::new(2, 3).unwrap();
        let zero = CurvatureTensor::<GaussianRational>::zero(5);
        let z = ZVector::from_leading(split, &[g(1, 2), g(-1, 0)], &[g(0, 1)]).unwrap();
        assert_eq!(symmetrized_trace_direct(&zero, &z).unwrap(), g(0, 0));
        let r = zoo::random_block_tensor(2, 3, 1).unwrap().complexify();
        assert_eq!(symmetrized_trace_direct(&r, &ZVector::zero(split)).unwrap(), g(0, 0));
    }

    #[test]
    fn direct_matches_formula() {
        for (d1, d2) in [(2, 3), (1, 4)] {
            let split = BlockSplit::new(d1, d2).unwrap();
            let r = zoo::random_block_tensor(d1, d2, 2).unwrap().map(RealScalar::lift);
            let ledger = coefficient_forms(&r, split).unwrap();
            let z = ZVector::from_leading(split, &[g(1, 1), g(2, -1)][..d1.min(2)], &[g(0, 1), g(3, 0)]).unwrap();
            assert_eq!(
                symmetrized_trace_direct(&r, &z).unwrap(),
                symmetrized_trace_formula(&ledger, &z).unwrap()
            );
        }
    }

    #[test]
    fn guard_is_enforced() {
        assert_eq!(permutation_count(BlockSplit::new(11, 1).unwrap()), 39_916_800);
        let big = BlockSplit::new(11, 1).unwrap();
        assert!(matches!(
            symmetrized_trace_direct(&CurvatureTensor::<GaussianRational>::zero(12), &ZVector::zero(big)),
            Err(Error::CombinatorialGuard { .. })
        ));
    }
}
