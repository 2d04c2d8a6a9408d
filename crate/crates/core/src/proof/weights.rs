//! The weights `xi`, `eta` of the final quadratic form.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// `xi, eta > 0` together with `mu = (d2-1) eta + (d2-d1-1) xi` and
/// `nu = (d1-1) xi + (d1-d2-1) eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightPair {
    pub d1: usize,
    pub d2: usize,
    pub xi: Rational,
    pub eta: Rational,
    pub mu: Rational,
    pub nu: Rational,
}

fn r(n: usize) -> Rational {
    Rational::from_int(n as i64)
}

/// The four quantities that must be `> 0, > 0, >= 0, >= 0`:
/// `mu`, `nu`, `(d1-d2-2) eta + d1 xi`, `(d2-d1-2) xi + d2 eta`.
pub fn weight_inequalities(d1: usize, d2: usize, xi: Rational, eta: Rational) -> [Rational; 4] {
    let (a, b) = (r(d1), r(d2));
    let one = Rational::from_int(1);
    let two = Rational::from_int(2);
    [
        (b - one) * eta + (b - a - one) * xi,
        (a - one) * xi + (a - b - one) * eta,
        (a - b - two) * eta + a * xi,
        (b - a - two) * xi + b * eta,
    ]
}

impl WeightPair {
    /// Validates `xi, eta > 0` and the four inequalities.
    pub fn new(d1: usize, d2: usize, xi: Rational, eta: Rational) -> Result<Self> {
        let zero = Rational::from_int(0);
        let [mu, nu, third, fourth] = weight_inequalities(d1, d2, xi, eta);
        if xi <= zero || eta <= zero || mu <= zero || nu <= zero || third < zero || fourth < zero {
            return Err(Error::Precondition(format!(
                "weights xi={xi}, eta={eta} violate the admissibility inequalities for ({d1},{d2})"
            )));
        }
        Ok(WeightPair {
            d1,
            d2,
            xi,
            eta,
            mu,
            nu,
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "xi": self.xi.to_value(),
            "eta": self.eta.to_value(),
            "mu": self.mu.to_value(),
            "nu": self.nu.to_value(),
        })
    }
}

/// Deterministic admissible weights for `2 <= d1 <= d2`, `d1 + d2 >= 5`:
/// `(1, 1)` for equal blocks; for `d2 >= d1 + 2`, `eta = 1` and `xi` one more
/// than the larger lower bound; for `d2 = d1 + 1`, `eta = 1` and `xi` the
/// midpoint of its admissible interval.
pub fn select_xi_eta(d1: usize, d2: usize) -> Result<WeightPair> {
    if d1 < 2 || d1 > d2 || d1 + d2 < 5 {
        return Err(Error::Precondition(format!(
            "weights need 2 <= d1 <= d2 and d1 + d2 >= 5, got ({d1},{d2})"
        )));
    }
    let one = Rational::from_int(1);
    let (a, b) = (r(d1), r(d2));
    let max = |p: Rational, q: Rational| if p > q { p } else { q };
    let xi = if d2 == d1 {
        one
    } else if d2 >= d1 + 2 {
        max((b - a + one) / (a - one), (b - a + Rational::from_int(2)) / a) + one
    } else {
        let low = max(Rational::from_int(2) / (a - one), Rational::from_int(3) / a);
        (low + a + one) / Rational::from_int(2)
    };
    WeightPair::new(d1, d2, xi, one).map_err(|e| {
        Error::IdentityViolation(format!("selected weights are not admissible: {e}"))
    })
}
