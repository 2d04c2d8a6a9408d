//! Coefficient forms of `Tr(cR_X^2)` for a block tensor.
//!
//! With `c(m)` the coefficient of the monomial `m` in the quartic, the raw
//! forms are read off as
//!
//! | form          | monomial             | value    |
//! |---------------|----------------------|----------|
//! | `p1 i`        | `x_i^4`              | `c`      |
//! | `p2 ij`       | `x_i^3 x_j`          | `c`      |
//! | `p3 ij`       | `x_i^2 x_j^2`        | `c / 2`  |
//! | `p4 ijk`      | `x_i^2 x_j x_k`      | `c / 2`  |
//! | `p5 ijkl`     | `x_i x_j x_k x_l`    | `c / 24` |
//! | `s1 ia`       | `x_i^2 y_a^2`        | `c / 2`  |
//! | `s2 iab`      | `x_i^2 y_a y_b`      | `c / 4`  |
//! | `s3 ija`      | `x_i x_j y_a^2`      | `c / 4`  |
//! | `s4 ijab`     | `x_i x_j y_a y_b`    | `c / 4`  |
//!
//! with the `q` forms mirroring the `p` forms on `W2`, every index tuple
//! ordered with distinct entries where the monomial requires it, and each
//! aggregate `P_h`, `Q_h`, `S_h` the sum of its raw form over those tuples.
//! The `s4` normalization is the one under which the symmetrized quartic has
//! the coefficient `C_4` of [`abc_coefficients`](super::abc_coefficients).

use std::collections::BTreeMap;

use serde_json::Value;

use crate::conditions::{block_condition_residual, within, BlockSplit};
use crate::error::{Error, Result};
use crate::polynomial::QuarticForm;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};
use crate::tensor::CurvatureTensor;

/// The five aggregates with closed formulas, computed directly from the
/// tensor components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedForms<F> {
    pub p1: F,
    pub p3: F,
    pub q1: F,
    pub q3: F,
    pub s1: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormLedger<F> {
    pub split: BlockSplit,
    /// `P_1, P_2, P_3`.
    pub p: [F; 3],
    /// `Q_1, Q_2, Q_3`.
    pub q: [F; 3],
    /// `S_1, S_2, S_3, S_4`.
    pub s: [F; 4],
    /// Raw forms keyed by name and index tuple.
    pub raw: BTreeMap<(&'static str, Vec<usize>), F>,
    pub published: PublishedForms<F>,
}

impl<F: Scalar> FormLedger<F> {
    pub fn to_json(&self) -> Value {
        let v = |x: &F| x.to_value();
        serde_json::json!({
            "P": self.p.iter().map(v).collect::<Vec<_>>(),
            "Q": self.q.iter().map(v).collect::<Vec<_>>(),
            "S": self.s.iter().map(v).collect::<Vec<_>>(),
            "published": {
                "P1": v(&self.published.p1),
                "P3": v(&self.published.p3),
                "Q1": v(&self.published.q1),
                "Q3": v(&self.published.q3),
                "S1": v(&self.published.s1),
            },
        })
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(F) -> G) -> FormLedger<G> {
        FormLedger {
            split: self.split,
            p: self.p.map(&f),
            q: self.q.map(&f),
            s: self.s.map(&f),
            raw: self.raw.iter().map(|(k, &v)| (k.clone(), f(v))).collect(),
            published: PublishedForms {
                p1: f(self.published.p1),
                p3: f(self.published.p3),
                q1: f(self.published.q1),
                q3: f(self.published.q3),
                s1: f(self.published.s1),
            },
        }
    }
}

pub(crate) fn require_block<F: Scalar>(cr: &CurvatureTensor<F>, split: BlockSplit) -> Result<()> {
    split.check_dim(cr.dim())?;
    let residual = block_condition_residual(cr, split);
    if !within(residual, F::is_exact(), DEFAULT_TOLERANCE) {
        return Err(Error::Precondition(format!(
            "block conditions fail for split ({},{}) (residual {residual:e})",
            split.d1, split.d2
        )));
    }
    Ok(())
}

fn distinct(idx: &[usize]) -> bool {
    idx.iter()
        .enumerate()
        .all(|(k, a)| idx[k + 1..].iter().all(|b| a != b))
}

/// Extracts every coefficient form from the quartic and checks the five
/// closed formulas against the extraction.
pub fn coefficient_forms<F: Scalar>(cr: &CurvatureTensor<F>, split: BlockSplit) -> Result<FormLedger<F>> {
    require_block(cr, split)?;
    let quartic = QuarticForm::trace_jacobi_squared(cr);
    let c = |m: [usize; 4]| quartic.coeff(m);
    let frac = |num: i64, den: i64| F::from_ratio(num, den);
    let w1: Vec<usize> = split.w1().collect();
    let w2: Vec<usize> = split.w2().collect();

    // monomials with an odd number of W2 variables cannot occur
    for (m, v) in quartic.terms() {
        if m.iter().filter(|&&t| split.in_w2(t)).count() % 2 == 1 && !v.is_negligible(DEFAULT_TOLERANCE) {
            return Err(Error::IdentityViolation(format!(
                "monomial {m:?} with an odd number of W2 variables has coefficient {}",
                v.to_value()
            )));
        }
    }

    let mut raw: BTreeMap<(&'static str, Vec<usize>), F> = BTreeMap::new();
    // forms on a single block; names are (quartic, cubic-linear, square-square,
    // square-linear-linear, all distinct)
    let mut single_block = |names: [&'static str; 5], w: &[usize]| {
        for &i in w {
            raw.insert((names[0], vec![i]), c([i, i, i, i]));
            for &j in w {
                if i == j {
                    continue;
                }
                raw.insert((names[1], vec![i, j]), c([i, i, i, j]));
                raw.insert((names[2], vec![i, j]), c([i, i, j, j]) * frac(1, 2));
                for &k in w {
                    if distinct(&[i, j, k]) {
                        raw.insert((names[3], vec![i, j, k]), c([i, i, j, k]) * frac(1, 2));
                    }
                    for &l in w {
                        if distinct(&[i, j, k, l]) {
                            raw.insert((names[4], vec![i, j, k, l]), c([i, j, k, l]) * frac(1, 24));
                        }
                    }
                }
            }
        }
    };
    single_block(["p1", "p2", "p3", "p4", "p5"], &w1);
    single_block(["q1", "q2", "q3", "q4", "q5"], &w2);
    for &i in &w1 {
        for &a in &w2 {
            raw.insert(("s1", vec![i, a]), c([i, i, a, a]) * frac(1, 2));
            for &b in &w2 {
                if a != b {
                    raw.insert(("s2", vec![i, a, b]), c([i, i, a, b]) * frac(1, 4));
                }
            }
            for &j in &w1 {
                if i != j {
                    raw.insert(("s3", vec![i, j, a]), c([i, j, a, a]) * frac(1, 4));
                    for &b in &w2 {
                        if a != b {
                            raw.insert(("s4", vec![i, j, a, b]), c([i, j, a, b]) * frac(1, 4));
                        }
                    }
                }
            }
        }
    }
    let total = |name: &str| F::sum_iter(raw.iter().filter(|((n, _), _)| *n == name).map(|(_, &v)| v));
    let p = [total("p1"), total("p2"), total("p3")];
    let q = [total("q1"), total("q2"), total("q3")];
    let s = [total("s1"), total("s2"), total("s3"), total("s4")];
    let published = published_forms(cr, split);
    let checks = [
        ("P1", p[0], published.p1),
        ("P3", p[2], published.p3),
        ("Q1", q[0], published.q1),
        ("Q3", q[2], published.q3),
        ("S1", s[0], published.s1),
    ];
    for (name, extracted, closed) in checks {
        let tol = DEFAULT_TOLERANCE * (1.0 + closed.modulus());
        if !extracted.approx_eq(&closed, tol) {
            return Err(Error::IdentityViolation(format!(
                "{name}: extraction gives {}, closed formula gives {}",
                extracted.to_value(),
                closed.to_value()
            )));
        }
    }
    Ok(FormLedger {
        split,
        p,
        q,
        s,
        raw,
        published,
    })
}

/// The closed formulas for `P_1, P_3, Q_1, Q_3, S_1`.
pub fn published_forms<F: Scalar>(cr: &CurvatureTensor<F>, split: BlockSplit) -> PublishedForms<F> {
    let g = |a, b, c, d| cr.get(a, b, c, d);
    let two = F::from_int(2);
    let w1: Vec<usize> = split.w1().collect();
    let w2: Vec<usize> = split.w2().collect();
    // block-symmetric pieces: (own block, other block)
    let aggregate_1 = |own: &[usize], other: &[usize]| {
        let mut acc = F::zero();
        for &i in own {
            for &k in own {
                for &l in own {
                    acc = acc + g(i, k, i, l) * g(i, k, i, l);
                }
            }
            for &a in other {
                for &b in other {
                    acc = acc + g(i, a, i, b) * g(i, a, i, b);
                }
            }
        }
        acc
    };
    let aggregate_3 = |own: &[usize], other: &[usize]| {
        let mut acc = F::zero();
        for &i in own {
            for &j in own {
                if i == j {
                    continue;
                }
                for &k in own {
                    for &l in own {
                        acc = acc
                            + g(i, k, i, l) * g(j, k, j, l)
                            + g(i, k, j, l) * g(i, k, j, l)
                            + g(i, k, j, l) * g(j, k, i, l);
                    }
                }
                for &a in other {
                    for &b in other {
                        acc = acc + g(i, a, i, b) * g(j, a, j, b) + two * g(i, a, j, b) * g(i, a, j, b);
                    }
                }
            }
        }
        acc
    };
    let p1 = aggregate_1(&w1, &w2);
    let p3 = aggregate_3(&w1, &w2);
    let mut s1 = F::zero();
    let q1 = aggregate_1(&w2, &w1);
    let q3 = aggregate_3(&w2, &w1);
    for &i in &w1 {
        for &a in &w2 {
            for &k in &w1 {
                for &l in &w1 {
                    s1 = s1 + g(i, k, i, l) * g(a, k, a, l);
                }
                for &c in &w2 {
                    s1 = s1 + g(a, k, i, c) * g(a, k, i, c);
                }
            }
            for &c in &w2 {
                for &d in &w2 {
                    s1 = s1 + g(i, c, i, d) * g(a, c, a, d);
                }
            }
        }
    }
    PublishedForms { p1, p3, q1, q3, s1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::zoo;

    #[test]
    fn zero_tensor_gives_zero_ledger() {
        let split = BlockSplit::new(2, 3).unwrap();
        let l = coefficient_forms(&CurvatureTensor::<Rational>::zero(5), split).unwrap();
        assert!(l.p.iter().chain(&l.q).chain(&l.s).all(|v| *v == Rational::from_int(0)));
    }

    #[test]
    fn constant_curvature_ledger() {
        // P1 = d1(d1-1) c^2 + d1 d2 c^2 = d1(n-1) c^2
        let split = BlockSplit::new(2, 3).unwrap();
        let c = Rational::new(3, 2);
        let l = coefficient_forms(&CurvatureTensor::constant_curvature(5, c).unwrap(), split).unwrap();
        assert_eq!(l.p[0], Rational::from_int(8) * c * c);
        assert_eq!(l.q[0], Rational::from_int(12) * c * c);
    }

    #[test]
    fn non_block_tensor_is_rejected() {
        let split = BlockSplit::new(2, 3).unwrap();
        let r = zoo::random_tensor(5, 1).unwrap();
        assert!(matches!(coefficient_forms(&r, split), Err(Error::Precondition(_))));
    }

    #[test]
    fn ledger_is_quadratic() {
        let split = BlockSplit::new(2, 3).unwrap();
        let r = zoo::random_block_tensor(2, 3, 5).unwrap();
        let l1 = coefficient_forms(&r, split).unwrap();
        let l3 = coefficient_forms(&r.scaled(Rational::from_int(3)), split).unwrap();
        assert_eq!(l1.map(|v| v * Rational::from_int(9)).s, l3.s);
        assert_eq!(l1.map(|v| v * Rational::from_int(9)).p, l3.p);
    }
}
