//! Finite sets of vectors in `Z` with prescribed aggregate coefficients.
//!
//! The ten coefficient functions are quartic in `X`, so any set whose
//! aggregate is a fixed combination `sum_p w_p v(X_p)` of probe vectors can be
//! assembled once each weight `w_p` is written as a sum of fourth powers:
//! the identity `(t+3)^4 - 3(t+2)^4 + 3(t+1)^4 - t^4 = 24t + 36` with
//! `(1+i)^4 = -4` gives
//! `w = (t+3)^4 + ((1+i)(t+2))^4 + (t+2)^4 + 3(t+1)^4 + ((1+i)t)^4 + 3t^4`
//! for `t = (w - 36)/24`, i.e. at most ten scaled copies per probe.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::conditions::BlockSplit;
use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::scalar::{GaussianRational, Rational, Scalar};

use super::symmetric::{abc_coefficients, CoefficientVector10, ZVector};
use super::weights::WeightPair;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorSet<F> {
    pub split: BlockSplit,
    pub vectors: Vec<ZVector<F>>,
    pub aggregate: CoefficientVector10<F>,
}

impl<F: Scalar> VectorSet<F> {
    pub fn from_vectors(split: BlockSplit, vectors: Vec<ZVector<F>>) -> Self {
        let aggregate = vectors
            .iter()
            .fold(CoefficientVector10::zero(), |acc, z| acc.add(&abc_coefficients(z)));
        VectorSet {
            split,
            vectors,
            aggregate,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "m": self.vectors.len(),
            "aggregate": self.aggregate.to_json(),
        })
    }
}

fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(Rational::from_int(re), Rational::from_int(im))
}

/// Probe vectors in leading coordinates, given as `(x, y)`. Probes needing two
/// coordinates in a block of size one are omitted.
fn probe_coordinates(split: BlockSplit) -> Vec<(Vec<i64>, Vec<i64>)> {
    let pairs_x = split.d1 >= 2;
    let pairs_y = split.d2 >= 2;
    let mut probes = vec![(vec![1], vec![])];
    if pairs_x {
        probes.push((vec![1, 1], vec![]));
        probes.push((vec![1, -1], vec![]));
    }
    probes.push((vec![], vec![1]));
    if pairs_y {
        probes.push((vec![], vec![1, 1]));
        probes.push((vec![], vec![1, -1]));
    }
    probes.push((vec![1], vec![1]));
    if pairs_y {
        probes.push((vec![1], vec![1, 1]));
    }
    if pairs_x {
        probes.push((vec![1, 1], vec![1]));
    }
    if pairs_x && pairs_y {
        probes.push((vec![1, 1], vec![1, 1]));
    }
    probes
}

pub fn probe_vectors(split: BlockSplit) -> Vec<ZVector<GaussianRational>> {
    let lift = |v: &[i64]| v.iter().map(|&a| gi(a, 0)).collect::<Vec<_>>();
    probe_coordinates(split)
        .iter()
        .map(|(x, y)| ZVector::from_leading(split, &lift(x), &lift(y)).expect("probe fits the split"))
        .collect()
}

/// Coefficient coordinates that can be nonzero for this split: those whose
/// factorial prefactor does not vanish.
pub fn reachable_coordinates(split: BlockSplit) -> Vec<usize> {
    let pairs_x = split.d1 >= 2;
    let pairs_y = split.d2 >= 2;
    let flags = [true, pairs_x, pairs_x, true, pairs_y, pairs_y, true, pairs_y, pairs_x, pairs_x && pairs_y];
    (0..10).filter(|&k| flags[k]).collect()
}

/// Matrix with one column per probe vector, restricted to the reachable
/// coordinates.
pub fn probe_matrix(split: BlockSplit) -> Matrix<GaussianRational> {
    let coords = reachable_coordinates(split);
    let columns: Vec<[GaussianRational; 10]> =
        probe_vectors(split).iter().map(|z| abc_coefficients(z).to_array()).collect();
    coords
        .iter()
        .map(|&k| columns.iter().map(|col| col[k]).collect())
        .collect()
}

/// Writes `w` as `sum mult * t^4`, returned as `(t, mult)` pairs with `t != 0`.
pub fn fourth_power_decomposition(w: GaussianRational) -> Vec<(GaussianRational, usize)> {
    if w.is_zero() {
        return vec![];
    }
    if w.is_one() {
        return vec![(w, 1)];
    }
    let t = (w - gi(36, 0)) / gi(24, 0);
    let one_plus_i = gi(1, 1);
    [
        (t + gi(3, 0), 1),
        (one_plus_i * (t + gi(2, 0)), 1),
        (t + gi(2, 0), 1),
        (t + gi(1, 0), 3),
        (one_plus_i * t, 1),
        (t, 3),
    ]
    .into_iter()
    .filter(|(s, _)| !s.is_zero())
    .collect()
}

/// A set of vectors in `Z` whose aggregate coefficients equal `targets`.
pub fn solve_vector_set(
    targets: &CoefficientVector10<GaussianRational>,
    split: BlockSplit,
) -> Result<VectorSet<GaussianRational>> {
    let coords = reachable_coordinates(split);
    let target = targets.to_array();
    if let Some(k) = (0..10).find(|k| !coords.contains(k) && !target[*k].is_zero()) {
        return Err(Error::UnreachableTarget(format!(
            "coordinate {} must be zero for split ({},{})",
            super::symmetric::COEFFICIENT_NAMES[k],
            split.d1,
            split.d2
        )));
    }
    if target.iter().all(|v| v.is_zero()) {
        return Ok(VectorSet::from_vectors(split, vec![]));
    }
    let rhs: Vec<GaussianRational> = coords.iter().map(|&k| target[k]).collect();
    let weights = solve(&probe_matrix(split), &rhs)?;
    let mut vectors = Vec::new();
    for (probe, w) in probe_vectors(split).iter().zip(weights) {
        for (t, mult) in fourth_power_decomposition(w) {
            let scaled = probe.scaled(t);
            vectors.extend(std::iter::repeat_n(scaled, mult));
        }
    }
    let set = VectorSet::from_vectors(split, vectors);
    if set.aggregate != *targets {
        return Err(Error::IdentityViolation(
            "assembled vector set does not reproduce its target".into(),
        ));
    }
    Ok(set)
}

/// Target coefficients turning the aggregated symmetrized quartic into the
/// final quadratic form: `A_3 = xi`, `B_3 = eta`, `C_1 = -2(xi + eta)`,
/// `A_1 = (d2-d1+1) xi + d2 eta`, `B_1 = (d1-d2+1) eta + d1 xi`, rest zero.
pub fn case2_target(w: &WeightPair) -> CoefficientVector10<GaussianRational> {
    let [a1, b1] = leading_weights(w);
    let lift = |q: Rational| GaussianRational::new(q, Rational::zero());
    let zero = GaussianRational::zero();
    let two = Rational::from_int(2);
    CoefficientVector10 {
        a: [lift(a1), zero, lift(w.xi)],
        b: [lift(b1), zero, lift(w.eta)],
        c: [lift(-two * (w.xi + w.eta)), zero, zero, zero],
    }
}

/// `(A_1, B_1)` of the target.
pub fn leading_weights(w: &WeightPair) -> [Rational; 2] {
    let (d1, d2) = (Rational::from_int(w.d1 as i64), Rational::from_int(w.d2 as i64));
    let one = Rational::one();
    [
        (d2 - d1 + one) * w.xi + d2 * w.eta,
        (d1 - d2 + one) * w.eta + d1 * w.xi,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use crate::proof::symmetric::rhs_combination;
    use crate::proof::weights::select_xi_eta;

    #[test]
    fn fourth_powers_sum_to_weight() {
        for w in [gi(0, 0), gi(1, 0), gi(36, 0), gi(-7, 3), gi(12, 0)] {
            let total = fourth_power_decomposition(w)
                .into_iter()
                .fold(gi(0, 0), |acc, (t, m)| acc + gi(m as i64, 0) * t * t * t * t);
            assert_eq!(total, w);
        }
    }

    #[test]
    fn probe_matrix_is_nonsingular() {
        for (d1, d2) in [(2, 3), (3, 3), (1, 4), (2, 4)] {
            let split = BlockSplit::new(d1, d2).unwrap();
            let m = probe_matrix(split);
            assert_eq!(rank(&m), m.len());
            assert_eq!(m.len(), m[0].len());
        }
    }

    #[test]
    fn zero_target_gives_empty_set() {
        let split = BlockSplit::new(2, 3).unwrap();
        assert!(solve_vector_set(&CoefficientVector10::zero(), split).unwrap().is_empty());
    }

    #[test]
    fn case_two_target_is_reproduced() {
        let split = BlockSplit::new(3, 3).unwrap();
        let w = select_xi_eta(3, 3).unwrap();
        let target = case2_target(&w);
        assert_eq!(
            target.to_array(),
            [gi(4, 0), gi(0, 0), gi(1, 0), gi(4, 0), gi(0, 0), gi(1, 0), gi(-4, 0), gi(0, 0), gi(0, 0), gi(0, 0)]
        );
        let set = solve_vector_set(&target, split).unwrap();
        assert_eq!(set.aggregate, target);
        assert_eq!(rhs_combination(split, &set.aggregate), gi(0, 0));
    }

    #[test]
    fn unreachable_target_for_single_coordinate_block() {
        let split = BlockSplit::new(1, 4).unwrap();
        let mut t = CoefficientVector10::zero();
        t.a[2] = gi(1, 0);
        assert!(matches!(solve_vector_set(&t, split), Err(Error::UnreachableTarget(_))));
        t.a[2] = gi(0, 0);
        t.b[1] = gi(2, -1);
        assert_eq!(solve_vector_set(&t, split).unwrap().aggregate, t);
    }
}
