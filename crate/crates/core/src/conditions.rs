//! Pointwise curvature conditions: Einstein, 2-stein, the trace condition
//! `sum_m <R(X,e_m)X, R(X,e_m)Y> = 2 rho(X,Y)`, and the block conditions of
//! an orthogonal splitting.

use std::ops::Range;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::polynomial::{multiplicity, QuarticForm};
use crate::sampling::{orthonormal_pair, stream_rng};
use crate::scalar::{RealScalar, Scalar};
use crate::tensor::CurvatureTensor;

/// Finite-difference step used by [`trace_derivative_identity`] callers.
pub const FD_STEP: f64 = 1e-4;

/// `R^n = W1 + W2` with `W1` spanned by `e_0..e_{d1-1}` and `W2` by the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSplit {
    pub d1: usize,
    pub d2: usize,
}

impl BlockSplit {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidDimension {
                dim: d1 + d2,
                reason: format!("split ({d1},{d2}) needs two nonempty blocks"),
            });
        }
        Ok(BlockSplit { d1, d2 })
    }

    pub fn n(&self) -> usize {
        self.d1 + self.d2
    }

    pub fn w1(&self) -> Range<usize> {
        0..self.d1
    }

    pub fn w2(&self) -> Range<usize> {
        self.d1..self.n()
    }

    pub fn in_w2(&self, idx: usize) -> bool {
        idx >= self.d1
    }

    pub fn is_normalized(&self) -> bool {
        self.d1 <= self.d2
    }

    /// The split with the blocks exchanged, and the coordinate relabelling
    /// (`new index -> old index`) that realizes it.
    pub fn swapped(&self) -> (BlockSplit, Vec<usize>) {
        let perm = self.w2().chain(self.w1()).collect();
        (
            BlockSplit {
                d1: self.d2,
                d2: self.d1,
            },
            perm,
        )
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::InvalidDimension {
                dim: n,
                reason: format!("split ({},{}) needs dimension {}", self.d1, self.d2, self.n()),
            });
        }
        Ok(())
    }
}

/// `(lambda, deficit)` with `lambda = tr(rho)/n` and `deficit` the max-norm
/// of `rho - lambda I`.
pub fn einstein_deficit<F: Scalar>(t: &CurvatureTensor<F>) -> (F, f64) {
    let rho = t.ricci();
    let n = t.dim();
    let lambda = rho.trace() / F::from_int(n as i64);
    let mut deficit: f64 = 0.0;
    for u in 0..n {
        for v in 0..n {
            let target = if u == v { lambda } else { F::zero() };
            deficit = deficit.max((rho.get(u, v) - target).modulus());
        }
    }
    (lambda, deficit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SteinVerdict {
    TwoStein,
    Einstein,
    Neither,
}

impl SteinVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SteinVerdict::TwoStein => "two_stein",
            SteinVerdict::Einstein => "einstein",
            SteinVerdict::Neither => "neither",
        }
    }
}

/// Result of the polarization test for `Tr R_X = f1 |X|^2` and
/// `Tr(R_X^2) = f2 |X|^4`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinCertificate<F> {
    pub f1: F,
    pub f2: F,
    /// Max defect of `rho - f1 I`.
    pub residual1: f64,
    /// Max defect of the polarized quartic against `f2` times the polarized
    /// `|X|^4`, over all index 4-tuples.
    pub residual2: f64,
    pub verdict: SteinVerdict,
    /// False when `f2` is a least-squares fit rather than an exact constant.
    pub certifying: bool,
}

impl<F: Scalar> SteinCertificate<F> {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "f1": self.f1.to_value(),
            "f2": self.f2.to_value(),
            "residual1": self.residual1,
            "residual2": self.residual2,
            "verdict": self.verdict.as_str(),
            "certifying": self.certifying,
        })
    }
}

/// Polarization test of the 2-stein condition. `f2` is the average of the
/// diagonal coefficients `x_p^4`; when the defect exceeds `tol`, the
/// reported `f2` is the least-squares fit over the polarization basis.
pub fn two_stein_certificate<F: RealScalar>(t: &CurvatureTensor<F>, tol: f64) -> SteinCertificate<F> {
    let n = t.dim();
    let (f1, residual1) = einstein_deficit(t);
    let quartic = QuarticForm::trace_jacobi_squared(t);
    let norm = QuarticForm::<F>::norm_fourth(n);
    let f2_diag = F::sum_iter((0..n).map(|p| quartic.coeff([p, p, p, p]))) / F::from_int(n as i64);
    let mut residual2: f64 = 0.0;
    let mut cross = F::zero();
    let mut norm_sq = F::zero();
    for m in QuarticForm::<F>::monomials(n) {
        let s = quartic.polarized(m);
        let e = norm.polarized(m);
        residual2 = residual2.max((s - f2_diag * e).modulus());
        let mult = F::from_int(multiplicity(&m) as i64);
        cross = cross + mult * s * e;
        norm_sq = norm_sq + mult * e * e;
    }
    let einstein = within(residual1, F::is_exact(), tol);
    let stein = within(residual2, F::is_exact(), tol);
    let verdict = match (einstein, stein) {
        (true, true) => SteinVerdict::TwoStein,
        (true, false) => SteinVerdict::Einstein,
        _ => SteinVerdict::Neither,
    };
    let f2 = if stein { f2_diag } else { cross / norm_sq };
    SteinCertificate {
        f1,
        f2,
        residual1,
        residual2,
        verdict,
        certifying: stein,
    }
}

/// Exact fields demand an exact zero; floats compare against `tol`.
pub fn within(residual: f64, exact: bool, tol: f64) -> bool {
    if exact {
        residual == 0.0
    } else {
        residual <= tol
    }
}

fn check_unit_orthogonal<F: Scalar>(x: &[F], y: &[F], tol: f64) -> Result<()> {
    let one = F::one();
    if !(dot(x, x) - one).is_negligible(tol) || !(dot(y, y) - one).is_negligible(tol) {
        return Err(Error::Precondition("X and Y must be unit vectors".into()));
    }
    if !dot(x, y).is_negligible(tol) {
        return Err(Error::Precondition("X and Y must be orthogonal".into()));
    }
    Ok(())
}

/// `sum_m <R(X,e_m)X, R(X,e_m)Y> - 2 rho(X,Y)` for unit `X` orthogonal to
/// unit `Y`.
pub fn hc2_residual<F: Scalar>(r: &CurvatureTensor<F>, x: &[F], y: &[F], tol: f64) -> Result<F> {
    if x.len() != r.dim() || y.len() != r.dim() {
        return Err(Error::Precondition("vector length must match dimension".into()));
    }
    check_unit_orthogonal(x, y, tol)?;
    Ok(hc2_unchecked(r, x, y))
}

fn hc2_unchecked<F: Scalar>(r: &CurvatureTensor<F>, x: &[F], y: &[F]) -> F {
    r.jacobi_pairing(x, y) - F::from_int(2) * r.ricci().eval(x, y)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftEquivalenceReport<F> {
    pub samples: usize,
    pub seed: u64,
    /// Max of `|sum <cR(X,e)X, cR(X,e)Y> - (sum <R(X,e)X, R(X,e)Y> - 2 rho(X,Y))|`.
    pub identity_defect: f64,
    pub identity_holds: bool,
    pub max_hc2_residual: f64,
    pub hc2_vanishes: bool,
    /// Polarization certificate of the shifted tensor; `H` is its `f2`.
    pub shifted: SteinCertificate<F>,
    pub shifted_two_stein: bool,
    /// Both conditions hold or both fail.
    pub equivalent: bool,
}

impl<F: Scalar> ShiftEquivalenceReport<F> {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.equivalent
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "samples": self.samples,
            "identity_defect": self.identity_defect,
            "identity_holds": self.identity_holds,
            "max_hc2_residual": self.max_hc2_residual,
            "hc2_vanishes": self.hc2_vanishes,
            "shifted": self.shifted.to_json(),
            "H": self.shifted.f2.to_value(),
            "shifted_two_stein": self.shifted_two_stein,
            "equivalent": self.equivalent,
        })
    }
}

/// Checks the shift identity on `samples` seeded orthonormal pairs and
/// compares the trace condition of `r` with the 2-stein condition of
/// `shift(r)`.
pub fn shift_equivalence_check<F: RealScalar>(
    r: &CurvatureTensor<F>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> ShiftEquivalenceReport<F> {
    let n = r.dim();
    let cr = r.shift();
    let mut identity_defect: f64 = 0.0;
    let mut max_hc2: f64 = 0.0;
    for k in 0..samples {
        let (x, y) = orthonormal_pair::<F>(n, &mut stream_rng(seed, k as u64));
        let rhs = hc2_unchecked(r, &x, &y);
        let lhs = cr.jacobi_pairing(&x, &y);
        identity_defect = identity_defect.max((lhs - rhs).modulus());
        max_hc2 = max_hc2.max(rhs.modulus());
    }
    let within = |v: f64| within(v, F::is_exact(), tol);
    let shifted = two_stein_certificate(&cr, tol);
    let shifted_two_stein = shifted.certifying;
    let hc2_vanishes = within(max_hc2);
    ShiftEquivalenceReport {
        samples,
        seed,
        identity_defect,
        identity_holds: within(identity_defect),
        max_hc2_residual: max_hc2,
        hc2_vanishes,
        shifted,
        shifted_two_stein,
        equivalent: hc2_vanishes == shifted_two_stein,
    }
}

/// `(4 sum_m <cR(X,e_m)X, cR(X,e_m)Y>, central difference of Tr(cR_X^2)
/// along Y with step h)`.
pub fn trace_derivative_identity<F: RealScalar>(
    cr: &CurvatureTensor<F>,
    x: &[F],
    y: &[F],
    h: f64,
) -> Result<(F, f64)> {
    if x.iter().all(|v| v.is_zero()) {
        return Err(Error::Precondition("X must be nonzero".into()));
    }
    let symbolic = F::from_int(4) * cr.jacobi_pairing(x, y);
    let cf = cr.map(|v| v.to_f64());
    let at = |s: f64| {
        let p: Vec<f64> = x.iter().zip(y).map(|(a, b)| a.to_f64() + s * b.to_f64()).collect();
        cf.trace_jacobi_squared(&p)
    };
    Ok((symbolic, (at(h) - at(-h)) / (2.0 * h)))
}

/// Max modulus over the components `R_ijka`, `R_ijab`, `R_iabc` (and hence,
/// by the symmetries, every component with one or three `W2` indices or a
/// pair inside one block).
pub fn block_condition_residual<F: Scalar>(t: &CurvatureTensor<F>, split: BlockSplit) -> f64 {
    let mut worst: f64 = 0.0;
    let n = t.dim().min(split.n());
    let (w1, w2) = (0..split.d1, split.d1..n);
    for i in w1.clone() {
        for j in w1.clone() {
            for k in w1.clone() {
                for a in w2.clone() {
                    worst = worst.max(t.get(i, j, k, a).modulus());
                }
            }
            for a in w2.clone() {
                for b in w2.clone() {
                    worst = worst.max(t.get(i, j, a, b).modulus());
                }
            }
        }
        for a in w2.clone() {
            for b in w2.clone() {
                for c in w2.clone() {
                    worst = worst.max(t.get(i, a, b, c).modulus());
                }
            }
        }
    }
    worst
}

/// Max of `|R_iajb - R_ibja|`, which vanishes whenever the block residual
/// does.
pub fn iajb_symmetry_defect<F: Scalar>(t: &CurvatureTensor<F>, split: BlockSplit) -> f64 {
    let mut worst: f64 = 0.0;
    for i in split.w1() {
        for j in split.w1() {
            for a in split.w2() {
                for b in split.w2() {
                    worst = worst.max((t.get(i, a, j, b) - t.get(i, b, j, a)).modulus());
                }
            }
        }
    }
    worst
}

/// One line of a check report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: String,
    pub passed: bool,
    pub residuals: Map<String, Value>,
    pub seed: u64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn new(check: &str, passed: bool, verdict: &str, seed: u64, tolerance: f64) -> Self {
        CheckReport {
            check: check.into(),
            verdict: verdict.into(),
            passed,
            residuals: Map::new(),
            seed,
            tolerance,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.residuals.insert(key.into(), value.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::zoo;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|k| if k == i { q(1) } else { q(0) }).collect()
    }

    #[test]
    fn constant_curvature_is_two_stein() {
        let k = Rational::new(3, 2);
        let c = two_stein_certificate(&CurvatureTensor::constant_curvature(5, k).unwrap(), 0.0);
        assert_eq!(c.verdict, SteinVerdict::TwoStein);
        assert_eq!(c.f1, q(4) * k);
        assert_eq!(c.f2, q(4) * k * k);
        assert_eq!((c.residual1, c.residual2), (0.0, 0.0));
    }

    #[test]
    fn einstein_deficit_examples() {
        let (l, d) = einstein_deficit(&CurvatureTensor::constant_curvature(5, q(2)).unwrap());
        assert_eq!((l, d), (q(8), 0.0));
        // Ricci blocks k1 (p-1) = 3 and k2 (q-1) = 2
        let (_, d) = einstein_deficit(&zoo::product_sphere_tensor(2, 3, q(3), q(1)).unwrap());
        assert_eq!(d, 0.6);
    }

    #[test]
    fn hc2_examples() {
        let r = CurvatureTensor::constant_curvature(5, q(3)).unwrap();
        assert_eq!(hc2_residual(&r, &e(5, 0), &e(5, 1), 0.0).unwrap(), q(0));
        let mut bad = e(5, 0);
        bad[1] = q(1);
        assert!(matches!(hc2_residual(&r, &bad, &e(5, 2), 0.0), Err(Error::Precondition(_))));
        assert!(matches!(hc2_residual(&r, &e(5, 0), &e(5, 0), 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn shift_equivalence_on_constant_curvature_five() {
        let r = CurvatureTensor::constant_curvature(5, q(5)).unwrap();
        let rep = shift_equivalence_check(&r, 5, 1, 0.0);
        assert!(rep.passed());
        assert!(rep.hc2_vanishes && rep.shifted_two_stein);
        assert_eq!(rep.shifted.f2, q(36));
    }

    #[test]
    fn euler_identity_along_x() {
        let cr = zoo::random_tensor(4, 2).unwrap();
        let x = vec![q(1), Rational::new(-1, 2), q(2), q(0)];
        let (sym, _) = trace_derivative_identity(&cr, &x, &x, FD_STEP).unwrap();
        assert_eq!(sym, q(4) * cr.trace_jacobi_squared(&x));
        assert!(trace_derivative_identity(&cr, &[q(0); 4], &x, FD_STEP).is_err());
    }

    #[test]
    fn block_residuals() {
        let split = BlockSplit::new(2, 3).unwrap();
        assert_eq!(block_condition_residual(&CurvatureTensor::constant_curvature(5, q(7)).unwrap(), split), 0.0);
        let b = zoo::random_block_tensor(2, 3, 4).unwrap();
        assert_eq!(block_condition_residual(&b, split), 0.0);
        assert_eq!(iajb_symmetry_defect(&b, split), 0.0);
        assert!(block_condition_residual(&zoo::random_tensor(5, 4).unwrap(), split) > 0.0);
    }

    #[test]
    fn swapped_split_relabels_blocks() {
        let (s, perm) = BlockSplit::new(3, 2).unwrap().swapped();
        assert_eq!((s.d1, s.d2), (2, 3));
        assert_eq!(perm, vec![3, 4, 0, 1, 2]);
    }
}
