//! Seeded certification of the algebraic identities behind the deduction at
//! a fixed split.

use serde_json::{json, Value};

use crate::conditions::BlockSplit;
use crate::error::{Error, Result};
use crate::sampling::stream_rng;
use crate::scalar::{RealScalar, Scalar};
use crate::zoo::random_block_tensor;

use super::ledger::coefficient_forms;
use super::quadratic::{case1_identity_check, final_quadratic_form, q4_psd_witness, Q4Witness};
use super::symmetric::random_zvector;
use super::symmetrize::{permutation_count, symmetrized_trace_direct, symmetrized_trace_formula, DIRECT_GUARD};
use super::weights::{select_xi_eta, WeightPair};

/// Random vectors of `Z` compared per tensor.
pub const ZVECTORS_PER_SEED: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub seed: u64,
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCertificate {
    pub split: BlockSplit,
    pub seeds: Vec<u64>,
    /// The direct permutation sum was skipped because of the guard.
    pub formula_only: bool,
    pub weights: Option<WeightPair>,
    pub witness: Option<Q4Witness>,
    pub comparisons: Vec<Comparison>,
}

impl IdentityCertificate {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.passed) && self.witness.as_ref().is_none_or(|w| w.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "split": [self.split.d1, self.split.d2],
            "seeds": self.seeds,
            "formula_only": self.formula_only,
            "weights": self.weights.map(|w| w.to_json()),
            "q4_witness": self.witness.as_ref().map(Q4Witness::to_json),
            "passed": self.passed(),
            "comparisons": self.comparisons.iter().map(|c| json!({
                "seed": c.seed,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// For each seed: a random block tensor, the dual-path ledger, direct against
/// formula symmetrized traces on seeded vectors of `Z`, and the identity of
/// the case the split falls in.
pub fn identities_certificate(split: BlockSplit, seeds: &[u64]) -> Result<IdentityCertificate> {
    if split.n() < 5 {
        return Err(Error::Unsupported(format!(
            "identities need d1 + d2 >= 5, got ({},{})",
            split.d1, split.d2
        )));
    }
    let formula_only = permutation_count(split) > DIRECT_GUARD;
    let (normal, perm) = if split.is_normalized() {
        (split, None)
    } else {
        let (s, p) = split.swapped();
        (s, Some(p))
    };
    let weights = if normal.d1 >= 2 {
        Some(select_xi_eta(normal.d1, normal.d2)?)
    } else {
        None
    };
    let witness = weights.map(|w| q4_psd_witness(normal, &w, 1e-12));
    let mut comparisons = Vec::new();
    for &seed in seeds {
        let mut record = |name: &str, passed: bool, detail: Value| {
            comparisons.push(Comparison {
                seed,
                name: name.to_string(),
                passed,
                detail,
            })
        };
        let real = random_block_tensor(split.d1, split.d2, seed)?;
        let t = real.map(RealScalar::lift);
        match coefficient_forms(&t, split) {
            Err(e) => record("ledger", false, json!(e.to_string())),
            Ok(ledger) => {
                record("ledger", true, json!(null));
                let mut rng = stream_rng(seed, 1);
                for k in 0..ZVECTORS_PER_SEED {
                    let z = random_zvector(split, &mut rng);
                    let formula = symmetrized_trace_formula(&ledger, &z)?;
                    if formula_only {
                        record("symmetrization", true, json!({"vector": k, "formula": formula.to_value()}));
                        continue;
                    }
                    let direct = symmetrized_trace_direct(&t, &z)?;
                    record(
                        "symmetrization",
                        direct == formula,
                        json!({"vector": k, "direct": direct.to_value(), "formula": formula.to_value()}),
                    );
                }
            }
        }
        let normal_tensor = match &perm {
            Some(p) => real.permute(p),
            None => real,
        };
        match weights {
            None => {
                let (lhs, rhs) = case1_identity_check(&normal_tensor, normal)?;
                record(
                    "case1",
                    lhs == rhs,
                    json!({"combination": lhs.to_value(), "sum_of_squares": rhs.to_value()}),
                );
            }
            Some(w) => match final_quadratic_form(&normal_tensor, normal, &w, 0.0) {
                Ok(dec) => {
                    let zero = crate::scalar::Rational::from_int(0);
                    record("q3_completion", dec.q3 == dec.q3_raw, dec.to_json());
                    record(
                        "decomposition",
                        dec.total == dec.q1 + dec.q2 + dec.q3 + dec.q4_explicit,
                        dec.to_json(),
                    );
                    record(
                        "nonnegativity",
                        dec.q1 >= zero && dec.q2 >= zero && dec.q3 >= zero && dec.q4 >= zero,
                        dec.to_json(),
                    );
                }
                Err(e) => record("decomposition", false, json!(e.to_string())),
            },
        }
    }
    Ok(IdentityCertificate {
        split,
        seeds: seeds.to_vec(),
        formula_only,
        weights,
        witness,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for (d1, d2) in [(2, 3), (1, 4), (3, 2)] {
            let cert = identities_certificate(BlockSplit::new(d1, d2).unwrap(), &[0, 1]).unwrap();
            assert!(cert.passed(), "{}", cert.to_json());
            assert!(!cert.formula_only);
        }
        let cert = identities_certificate(BlockSplit::new(3, 3).unwrap(), &[]).unwrap();
        assert_eq!(cert.witness.unwrap().determinants, [crate::scalar::Rational::from_int(20); 2]);
    }

    #[test]
    fn small_dimension_is_rejected() {
        assert!(identities_certificate(BlockSplit::new(2, 2).unwrap(), &[0]).is_err());
    }
}
