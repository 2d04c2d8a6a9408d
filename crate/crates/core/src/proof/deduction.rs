//! End-to-end deduction: a real block tensor whose shift satisfies the
//! 2-stein condition has constant sectional curvature.

use serde_json::{json, Value};
use thiserror::Error;

use crate::conditions::{block_condition_residual, two_stein_certificate, within, BlockSplit};
use crate::error::{Error, Hypothesis, Result};
use crate::io::tensor_hash;
use crate::sampling::{block_orthogonal, stream_rng};
use crate::scalar::{ComplexScalar, RealScalar, Scalar};
use crate::tensor::CurvatureTensor;

use super::ledger::coefficient_forms;
use super::quadratic::{case1_identity_check, final_quadratic_form, q4_psd_witness};
use super::solver::{case2_target, solve_vector_set};
use super::symmetric::{abc_coefficients, rhs_combination, ZVector};
use super::symmetrize::symmetrized_trace_formula;
use super::weights::select_xi_eta;
use crate::scalar::GaussianRational;

/// Number of random block-orthogonal frames in the component sweep, on top of
/// the given frame.
pub const BASIS_SWEEP: u64 = 32;
/// Master seed of the sweep.
pub const BASIS_SWEEP_SEED: u64 = 0x5eed;

/// Ordered record of the pipeline stages.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProofTrace {
    pub stages: Vec<(String, Value)>,
}

impl ProofTrace {
    fn push(&mut self, name: &str, data: Value) {
        self.stages.push((name.to_string(), data));
    }

    pub fn stage(&self, name: &str) -> Option<&Value> {
        self.stages.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.stages
                .iter()
                .map(|(name, data)| json!({"stage": name, "data": data}))
                .collect(),
        )
    }
}

/// A component equality that fails, with the frame it fails in (`0` is the
/// input frame).
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationCertificate {
    pub equality: String,
    pub frame: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<F> {
    ConstantCurvature(F),
    Violation(ViolationCertificate),
}

impl<F: Scalar> Verdict<F> {
    pub fn to_json(&self) -> Value {
        match self {
            Verdict::ConstantCurvature(c) => json!({"constant_curvature": c.to_value()}),
            Verdict::Violation(v) => json!({"violation": {
                "equality": v.equality,
                "frame": v.frame,
                "residual": v.residual,
            }}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deduction<F> {
    pub verdict: Verdict<F>,
    pub trace: ProofTrace,
}

#[derive(Debug, Error)]
#[error("{error}")]
pub struct DeductionFailure {
    pub error: Error,
    pub trace: ProofTrace,
}

impl DeductionFailure {
    /// The failing hypothesis, when that is the reason.
    pub fn hypothesis(&self) -> Option<Hypothesis> {
        match self.error {
            Error::HypothesisFailed { hypothesis, .. } => Some(hypothesis),
            _ => None,
        }
    }
}

/// Runs the deduction on a shifted tensor `cr` with the block decomposition
/// `split`. Hypothesis and identity failures come back with the trace so far.
pub fn constant_curvature_deduction<F: RealScalar>(
    cr: &CurvatureTensor<F>,
    split: BlockSplit,
    tol: f64,
) -> std::result::Result<Deduction<F>, DeductionFailure> {
    let mut trace = ProofTrace::default();
    match run(cr, split, tol, &mut trace) {
        Ok(verdict) => {
            trace.push("verdict", verdict.to_json());
            Ok(Deduction { verdict, trace })
        }
        Err(error) => {
            trace.push("error", json!(error.to_string()));
            Err(DeductionFailure { error, trace })
        }
    }
}

fn run<F: RealScalar>(
    cr: &CurvatureTensor<F>,
    split: BlockSplit,
    tol: f64,
    trace: &mut ProofTrace,
) -> Result<Verdict<F>> {
    let n = cr.dim();
    split.check_dim(n)?;
    trace.push(
        "input",
        json!({
            "dim": n,
            "split": [split.d1, split.d2],
            "exact": F::is_exact(),
            "hash": tensor_hash(cr),
            "tolerance": tol,
        }),
    );
    if n < 5 {
        return Err(Error::Unsupported(format!("the deduction needs n >= 5, got {n}")));
    }

    let block = block_condition_residual(cr, split);
    let stein = two_stein_certificate(cr, tol);
    trace.push(
        "hypotheses",
        json!({"block_residual": block, "two_stein": stein.to_json()}),
    );
    if !within(block, F::is_exact(), tol) {
        return Err(Error::HypothesisFailed {
            hypothesis: Hypothesis::BlockCondition,
            residual: block,
        });
    }
    if !within(stein.residual2, F::is_exact(), tol) {
        return Err(Error::HypothesisFailed {
            hypothesis: Hypothesis::TwoStein,
            residual: stein.residual2,
        });
    }
    let h = stein.f2;

    let (split, t) = if split.is_normalized() {
        (split, cr.clone())
    } else {
        let (s, perm) = split.swapped();
        (s, cr.permute(&perm))
    };
    trace.push("normalize", json!({"split": [split.d1, split.d2]}));

    let ledger = coefficient_forms(&t, split)?;
    trace.push("ledger", ledger.to_json());
    let lifted = ledger.map(|v| v.lift());
    let lift_z = |z: &ZVector<GaussianRational>| z.map(F::Complex::from_gaussian);

    if split.d1 == 1 {
        let probe = ZVector::from_leading(
            split,
            &[GaussianRational::new(1.into(), 0.into())],
            &[GaussianRational::new(0.into(), 1.into())],
        )?;
        let z = lift_z(&probe);
        let s_x = symmetrized_trace_formula(&lifted, &z)?;
        let rhs = h.lift() * rhs_combination(split, &abc_coefficients(&z));
        let (lhs, squares) = case1_identity_check(&t, split)?;
        trace.push(
            "case1",
            json!({
                "symmetrized_trace": s_x.to_value(),
                "rhs": rhs.to_value(),
                "combination": lhs.to_value(),
                "sum_of_squares": squares.to_value(),
            }),
        );
        if !(s_x - rhs).is_negligible(tol) {
            return Err(Error::IdentityViolation(
                "symmetrized trace at the isotropic probe differs from its 2-stein value".into(),
            ));
        }
        if !(lhs - squares).is_negligible(tol) {
            return Err(Error::IdentityViolation(
                "single-coordinate combination differs from its sum of squares".into(),
            ));
        }
    } else {
        let w = select_xi_eta(split.d1, split.d2)?;
        let target = case2_target(&w);
        let set = solve_vector_set(&target, split)?;
        let s_x = F::Complex::sum_iter(
            set.vectors
                .iter()
                .map(|z| symmetrized_trace_formula(&lifted, &lift_z(z)))
                .collect::<Result<Vec<_>>>()?,
        );
        let rhs = h.lift() * rhs_combination(split, &set.aggregate.map(F::Complex::from_gaussian));
        let dec = final_quadratic_form(&t, split, &w, tol)?;
        let witness = q4_psd_witness(split, &w, 1e-12);
        trace.push(
            "vector_set",
            json!({
                "weights": w.to_json(),
                "set": set.to_json(),
                "symmetrized_trace": s_x.to_value(),
                "rhs": rhs.to_value(),
            }),
        );
        trace.push("quadratic_form", json!({"parts": dec.to_json(), "q4_witness": witness.to_json()}));
        if !(s_x - dec.total.lift()).is_negligible(tol * (1.0 + s_x.modulus())) {
            return Err(Error::IdentityViolation(
                "symmetrized trace of the vector set differs from the quadratic form".into(),
            ));
        }
        if !(s_x - rhs).is_negligible(tol) {
            return Err(Error::IdentityViolation(
                "symmetrized trace of the vector set differs from its 2-stein value".into(),
            ));
        }
        if !witness.passed {
            return Err(Error::IdentityViolation("per-pair forms are not semidefinite".into()));
        }
    }

    let mut worst: Option<ViolationCertificate> = None;
    let mut max_defect: f64 = 0.0;
    for frame in 0..=BASIS_SWEEP {
        let rotated = if frame == 0 {
            t.clone()
        } else {
            let mut rng = stream_rng(BASIS_SWEEP_SEED, frame);
            t.change_basis(&block_orthogonal::<F>(split.d1, split.d2, &mut rng))
        };
        for (equality, residual) in component_defects(&rotated, split) {
            max_defect = max_defect.max(residual);
            if !within(residual, F::is_exact(), tol) && worst.as_ref().is_none_or(|w| residual > w.residual) {
                worst = Some(ViolationCertificate {
                    equality: equality.to_string(),
                    frame,
                    residual,
                });
            }
        }
    }
    trace.push(
        "component_equalities",
        json!({"frames": BASIS_SWEEP + 1, "seed": BASIS_SWEEP_SEED, "max_defect": max_defect}),
    );
    if let Some(v) = worst {
        return Ok(Verdict::Violation(v));
    }

    let c = stein.f1 / F::from_int(n as i64 - 1);
    let residual = cr.max_abs_diff(&CurvatureTensor::constant_curvature_unchecked(n, c));
    trace.push("comparison", json!({"c": c.to_value(), "residual": residual}));
    if !within(residual, F::is_exact(), tol) {
        return Ok(Verdict::Violation(ViolationCertificate {
            equality: "constant curvature".into(),
            frame: 0,
            residual,
        }));
    }
    Ok(Verdict::ConstantCurvature(c))
}

/// Largest defect of each component equality in the current frame.
fn component_defects<F: RealScalar>(t: &CurvatureTensor<F>, split: BlockSplit) -> Vec<(&'static str, f64)> {
    let g = |a, b, c, d| t.get(a, b, c, d);
    let diff = |a: F, b: F| (a - b).modulus();
    let w1: Vec<usize> = split.w1().collect();
    let w2: Vec<usize> = split.w2().collect();
    if split.d1 == 1 {
        let mut m: f64 = 0.0;
        for &a in &w2 {
            for &c in &w2 {
                for &d in &w2 {
                    if a != c && a != d {
                        m = m.max(diff(g(0, c, 0, d), g(a, c, a, d)));
                    }
                }
            }
        }
        return vec![("R_0c0d = R_acad", m)];
    }
    let own_diag = |own: &[usize]| {
        let mut m: f64 = 0.0;
        for &k in own {
            for &i in own {
                for &j in own {
                    if i != k && j != k {
                        m = m.max(diff(g(i, k, i, k), g(j, k, j, k)));
                    }
                }
            }
        }
        m
    };
    let reference = g(w1[0], w2[0], w1[0], w2[0]);
    let mut mixed: f64 = 0.0;
    for &i in &w1 {
        for &a in &w2 {
            mixed = mixed.max(diff(g(i, a, i, a), reference));
        }
    }
    let traces = |own: &[usize], other: &[usize]| {
        let p = F::from_int(own.len() as i64);
        let q = F::from_int(other.len() as i64);
        let mut m: f64 = 0.0;
        for &k in own {
            let u = F::sum_iter(own.iter().map(|&i| g(i, k, i, k)));
            let v = F::sum_iter(other.iter().map(|&a| g(a, k, a, k)));
            m = m.max(diff(q * u, (p - F::one()) * v));
        }
        m
    };
    vec![
        ("R_ikik = R_jkjk", own_diag(&w1)),
        ("R_acac = R_adad", own_diag(&w2)),
        ("R_iaia constant", mixed),
        ("d2 U_k = (d1-1) V_k", traces(&w1, &w2)),
        ("d1 U_a = (d2-1) V_a", traces(&w2, &w1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::zoo::random_block_tensor;

    #[test]
    fn constant_curvature_is_recognized() {
        for (d1, d2) in [(2, 3), (3, 2), (1, 4), (4, 1)] {
            let t = CurvatureTensor::constant_curvature(5, Rational::from_int(3)).unwrap();
            let d = constant_curvature_deduction(&t, BlockSplit::new(d1, d2).unwrap(), 0.0).unwrap();
            assert_eq!(d.verdict, Verdict::ConstantCurvature(Rational::from_int(3)));
        }
    }

    #[test]
    fn floats_are_recognized() {
        let t = CurvatureTensor::constant_curvature(6, -0.75_f64).unwrap();
        let d = constant_curvature_deduction(&t, BlockSplit::new(3, 3).unwrap(), 1e-9).unwrap();
        match d.verdict {
            Verdict::ConstantCurvature(c) => assert!((c + 0.75).abs() < 1e-12),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn random_block_tensor_fails_two_stein() {
        let t = random_block_tensor(2, 3, 4).unwrap();
        let err = constant_curvature_deduction(&t, BlockSplit::new(2, 3).unwrap(), 0.0).unwrap_err();
        assert_eq!(err.hypothesis(), Some(Hypothesis::TwoStein));
        assert!(err.trace.stage("hypotheses").is_some());
    }

    #[test]
    fn small_dimension_is_unsupported() {
        let t = CurvatureTensor::constant_curvature(4, Rational::from_int(1)).unwrap();
        let err = constant_curvature_deduction(&t, BlockSplit::new(2, 2).unwrap(), 0.0).unwrap_err();
        assert!(matches!(err.error, Error::Unsupported(_)));
    }
}
