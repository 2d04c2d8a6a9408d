//! The final quadratic form: the weighted combination of the coefficient
//! aggregates that the case-two vector set isolates, written as a sum of four
//! manifestly nonnegative parts.
//!
//! Every part comes in two mirrored halves, one for each block. For a block
//! `own` of size `p` with weight `w`, the other block of size `q` with weight
//! `w'`, and `s = xi + eta`:
//!
//! * `q1`: `w/2 sum_{i,j,k,l distinct in own} (R_ikjl + R_jkil)^2`;
//! * `q3`: `lead/(2(p-1)) sum_k sum_{i,j != k} (R_ikik - R_jkjk)^2`
//!   `+ cross/(2p) sum_{a in other} sum_{i,j} (R_iaia - R_jaja)^2`
//!   `+ s q (p-1) sum_k (U_k/(p-1) - V_k/q)^2`,
//!   with `lead = (q-p+1) w + q w'`, `cross = (q-1) w' + (q-p-1) w`,
//!   `U_k = sum_{i in own} R_ikik`, `V_k = sum_{a in other} R_akak`;
//! * `q4`: for each ordered pair `k != l` in `own`, a quadratic form in
//!   `u_i = R_ikil` (`i in own`) and `v_a = R_akal` (`a in other`) with
//!   diagonal weights `alpha = (q-p+4) w + q w'`, `beta = (p-q-2) w' + p w`,
//!   the rank-one terms `w (sum u)^2`, `w' (sum v)^2` and the coupling
//!   `-2 s (sum u)(sum v)`.

use serde_json::Value;

use crate::conditions::BlockSplit;
use crate::error::{Error, Result};
use crate::linalg::min_symmetric_eigenvalue;
use crate::scalar::{Rational, RealScalar, Scalar};
use crate::tensor::CurvatureTensor;

use super::ledger::{published_forms, require_block};
use super::solver::leading_weights;
use super::weights::WeightPair;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadDecomposition<F> {
    /// `A_1 P_1 + xi P_3 + B_1 Q_1 + eta Q_3 - 2(xi + eta) S_1`.
    pub total: F,
    pub q1: F,
    pub q2: F,
    /// Completed-square form of the diagonal part.
    pub q3: F,
    /// The same part expanded, as it arises from the aggregates.
    pub q3_raw: F,
    /// `total - q1 - q2 - q3`.
    pub q4: F,
    /// The explicit sum of the per-pair quadratic forms.
    pub q4_explicit: F,
    /// `U_k` for every index (own-block trace).
    pub u: Vec<F>,
    /// `V_k` for every index (other-block trace).
    pub v: Vec<F>,
}

impl<F: RealScalar> QuadDecomposition<F> {
    pub fn parts(&self) -> [F; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "total": self.total.to_f64(),
            "q1": self.q1.to_f64(),
            "q2": self.q2.to_f64(),
            "q3": self.q3.to_f64(),
            "q3_raw": self.q3_raw.to_f64(),
            "q4": self.q4.to_f64(),
            "q4_explicit": self.q4_explicit.to_f64(),
        })
    }
}

/// One block's view: its indices, the other block's indices and the weights.
struct Half<'a, F> {
    own: &'a [usize],
    other: &'a [usize],
    w: F,
    w_other: F,
}

impl<F: RealScalar> Half<'_, F> {
    fn p(&self) -> F {
        F::from_int(self.own.len() as i64)
    }

    fn q(&self) -> F {
        F::from_int(self.other.len() as i64)
    }

    fn lead(&self) -> F {
        (self.q() - self.p() + F::one()) * self.w + self.q() * self.w_other
    }

    fn cross(&self) -> F {
        (self.q() - F::one()) * self.w_other + (self.q() - self.p() - F::one()) * self.w
    }

    fn alpha(&self) -> F {
        (self.q() - self.p() + F::from_int(4)) * self.w + self.q() * self.w_other
    }

    fn beta(&self) -> F {
        (self.p() - self.q() - F::from_int(2)) * self.w_other + self.p() * self.w
    }
}

fn close<F: RealScalar>(a: F, b: F, tol: f64) -> bool {
    if F::is_exact() {
        a == b
    } else {
        let (a, b) = (a.to_f64(), b.to_f64());
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }
}

/// Decomposes the final quadratic form of the shifted block tensor `cr`
/// (normalized split, `d1 >= 2`) and checks both expansion identities.
pub fn final_quadratic_form<F: RealScalar>(
    cr: &CurvatureTensor<F>,
    split: BlockSplit,
    w: &WeightPair,
    tol: f64,
) -> Result<QuadDecomposition<F>> {
    if split.d1 < 2 || !split.is_normalized() || (w.d1, w.d2) != (split.d1, split.d2) {
        return Err(Error::Precondition(format!(
            "final quadratic form needs a normalized split with d1 >= 2 and matching weights, got ({},{})",
            split.d1, split.d2
        )));
    }
    require_block(cr, split)?;
    let g = |a, b, c, d| cr.get(a, b, c, d);
    let sq = |x: F| x * x;
    let (xi, eta) = (F::from_rational(w.xi), F::from_rational(w.eta));
    let s = xi + eta;
    let two = F::from_int(2);
    let w1: Vec<usize> = split.w1().collect();
    let w2: Vec<usize> = split.w2().collect();
    let halves = [
        Half { own: &w1, other: &w2, w: xi, w_other: eta },
        Half { own: &w2, other: &w1, w: eta, w_other: xi },
    ];

    let forms = published_forms(cr, split);
    let [a1, b1] = leading_weights(w).map(F::from_rational);
    let total = a1 * forms.p1 + xi * forms.p3 + b1 * forms.q1 + eta * forms.q3 - two * s * forms.s1;

    let n = split.n();
    let mut u = vec![F::zero(); n];
    let mut v = vec![F::zero(); n];
    for h in &halves {
        for &k in h.own {
            u[k] = F::sum_iter(h.own.iter().map(|&i| g(i, k, i, k)));
            v[k] = F::sum_iter(h.other.iter().map(|&a| g(a, k, a, k)));
        }
    }

    let mut q12 = [F::zero(); 2];
    let mut q3 = F::zero();
    let mut q3_raw = F::zero();
    let mut q4_explicit = F::zero();
    for (slot, h) in halves.iter().enumerate() {
        let (p, q) = (h.p(), h.q());
        let one = F::one();

        let mut acc = F::zero();
        for &i in h.own {
            for &j in h.own {
                for &k in h.own {
                    for &l in h.own {
                        if i != j && i != k && i != l && j != k && j != l && k != l {
                            acc = acc + sq(g(i, k, j, l) + g(j, k, i, l));
                        }
                    }
                }
            }
        }
        q12[slot] = h.w / two * acc;

        // completed squares
        let mut diag = F::zero();
        for &k in h.own {
            for &i in h.own {
                for &j in h.own {
                    if i != k && j != k {
                        diag = diag + sq(g(i, k, i, k) - g(j, k, j, k));
                    }
                }
            }
        }
        let mut mixed = F::zero();
        for &a in h.other {
            for &i in h.own {
                for &j in h.own {
                    mixed = mixed + sq(g(i, a, i, a) - g(j, a, j, a));
                }
            }
        }
        let traces = F::sum_iter(h.own.iter().map(|&k| sq(u[k] / (p - one) - v[k] / q)));
        q3 = q3
            + h.lead() / (two * (p - one)) * diag
            + h.cross() / (two * p) * mixed
            + s * q * (p - one) * traces;

        // expanded
        let mut own_sq = F::zero();
        let mut own_prod = F::zero();
        let mut other_prod = F::zero();
        let mut coupling = F::zero();
        for &k in h.own {
            for &i in h.own {
                own_sq = own_sq + sq(g(i, k, i, k));
                for &j in h.own {
                    own_prod = own_prod + g(i, k, i, k) * g(j, k, j, k);
                }
                for &a in h.other {
                    coupling = coupling + g(i, k, i, k) * g(a, k, a, k);
                }
            }
        }
        for &a in h.other {
            for &i in h.own {
                for &j in h.own {
                    other_prod = other_prod + g(i, a, i, a) * g(j, a, j, a);
                }
            }
        }
        q3_raw = q3_raw + h.lead() * own_sq + h.w * (own_prod + other_prod) - two * s * coupling;

        // per-pair forms
        for &k in h.own {
            for &l in h.own {
                if k == l {
                    continue;
                }
                let us: Vec<F> = h.own.iter().map(|&i| g(i, k, i, l)).collect();
                let vs: Vec<F> = h.other.iter().map(|&a| g(a, k, a, l)).collect();
                let su = F::sum_iter(us.iter().copied());
                let sv = F::sum_iter(vs.iter().copied());
                q4_explicit = q4_explicit
                    + h.alpha() * F::sum_iter(us.iter().map(|&x| sq(x)))
                    + h.beta() * F::sum_iter(vs.iter().map(|&x| sq(x)))
                    + h.w * sq(su)
                    + h.w_other * sq(sv)
                    - two * s * su * sv;
            }
        }
    }
    let cross_weight = F::from_int(split.d2 as i64 - 2) * xi + F::from_int(split.d1 as i64 - 2) * eta;
    let cross_sq = F::sum_iter(w1.iter().flat_map(|&i| w2.iter().map(move |&a| (i, a))).map(|(i, a)| sq(g(i, a, i, a))));
    q3_raw = q3_raw + cross_weight * cross_sq;

    let [q1, q2] = q12;
    let q4 = total - q1 - q2 - q3;
    if !close(q3, q3_raw, tol) {
        return Err(Error::IdentityViolation(format!(
            "completed squares {} differ from the expansion {}",
            q3.to_f64(),
            q3_raw.to_f64()
        )));
    }
    if !close(q4, q4_explicit, tol) {
        return Err(Error::IdentityViolation(format!(
            "remainder {} differs from the per-pair forms {}",
            q4.to_f64(),
            q4_explicit.to_f64()
        )));
    }
    Ok(QuadDecomposition {
        total,
        q1,
        q2,
        q3,
        q3_raw,
        q4,
        q4_explicit,
        u,
        v,
    })
}

/// Positive semidefiniteness evidence for the per-pair forms of `q4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Q4Witness {
    /// Smallest eigenvalue of each family's matrix.
    pub min_eigenvalues: [f64; 2],
    /// Determinant of each family's reduction to the two sum directions.
    pub determinants: [Rational; 2],
    /// `2(d1+d2) w^2 + 2(d1+d2-2) xi eta` with `w` the family's own weight.
    pub expected: [Rational; 2],
    pub passed: bool,
}

impl Q4Witness {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "min_eigenvalues": self.min_eigenvalues,
            "determinants": self.determinants.iter().map(|d| d.to_value()).collect::<Vec<_>>(),
            "expected": self.expected.iter().map(|d| d.to_value()).collect::<Vec<_>>(),
            "passed": self.passed,
        })
    }
}

/// Builds the matrix of each family of per-pair forms (variables `u_i` for
/// the `p - 2` indices of the own block outside the pair, `v_a` for the
/// other block), checks its smallest eigenvalue against `-tol`, and checks
/// the closed form of the reduced determinant exactly.
pub fn q4_psd_witness(split: BlockSplit, w: &WeightPair, tol: f64) -> Q4Witness {
    let (d1, d2) = (split.d1, split.d2);
    let families = [(d1, d2, w.xi, w.eta), (d2, d1, w.eta, w.xi)];
    let s = w.xi + w.eta;
    let mut min_eigenvalues = [0.0; 2];
    let mut determinants = [Rational::from_int(0); 2];
    let mut expected = [Rational::from_int(0); 2];
    for (slot, &(p, q, wo, wt)) in families.iter().enumerate() {
        let (pr, qr) = (Rational::from_int(p as i64), Rational::from_int(q as i64));
        let alpha = (qr - pr + Rational::from_int(4)) * wo + qr * wt;
        let beta = (pr - qr - Rational::from_int(2)) * wt + pr * wo;
        let nu = p.saturating_sub(2);
        let size = nu + q;
        let mut m = vec![vec![0.0; size]; size];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let val = match (r < nu, c < nu) {
                    (true, true) => wo + if r == c { alpha } else { Rational::from_int(0) },
                    (false, false) => wt + if r == c { beta } else { Rational::from_int(0) },
                    _ => -s,
                };
                *entry = val.to_f64();
            }
        }
        min_eigenvalues[slot] = min_symmetric_eigenvalue(&m);
        let nr = Rational::from_int(nu as i64);
        determinants[slot] = (alpha + nr * wo) * (beta + qr * wt) - nr * qr * s * s;
        let total = Rational::from_int((d1 + d2) as i64);
        expected[slot] = Rational::from_int(2) * total * wo * wo
            + Rational::from_int(2) * (total - Rational::from_int(2)) * w.xi * w.eta;
    }
    let passed = determinants == expected && min_eigenvalues.iter().all(|&e| e >= -tol);
    Q4Witness {
        min_eigenvalues,
        determinants,
        expected,
        passed,
    }
}

/// For `d1 = 1`: `(d2 P_1 + Q_1 - 2 S_1, sum_{a; c,d != a} (R_0c0d - R_acad)^2)`.
pub fn case1_identity_check<F: Scalar>(cr: &CurvatureTensor<F>, split: BlockSplit) -> Result<(F, F)> {
    if split.d1 != 1 {
        return Err(Error::Precondition(format!(
            "single-coordinate identity needs d1 = 1, got ({},{})",
            split.d1, split.d2
        )));
    }
    require_block(cr, split)?;
    let forms = published_forms(cr, split);
    let lhs = F::from_int(split.d2 as i64) * forms.p1 + forms.q1 - F::from_int(2) * forms.s1;
    let mut rhs = F::zero();
    for a in split.w2() {
        for c in split.w2() {
            for d in split.w2() {
                if a != c && a != d {
                    let diff = cr.get(0, c, 0, d) - cr.get(a, c, a, d);
                    rhs = rhs + diff * diff;
                }
            }
        }
    }
    Ok((lhs, rhs))
}
