//! Elementary symmetric functions, vectors of the set `Z`, and the ten
//! coefficient functions of the symmetrized quartic.
//!
//! `sigma_h` is the ordinary elementary symmetric polynomial, a sum over
//! increasing index tuples, so that `|x|^2 = sigma_1^2 - 2 sigma_2`.

use num_traits::Zero;
use rand::Rng;
use serde_json::Value;

use crate::conditions::BlockSplit;
use crate::error::{Error, Result};
use crate::sampling::small_gaussian;
use crate::scalar::{factorial, GaussianRational, Scalar};

/// `(sigma_1, sigma_2, sigma_3, sigma_4)` of `v`.
pub fn elementary_symmetric<F: Scalar>(v: &[F]) -> [F; 4] {
    // e[h] after processing a prefix is sigma_h of that prefix
    let mut e = [F::one(), F::zero(), F::zero(), F::zero(), F::zero()];
    for &x in v {
        for h in (1..=4).rev() {
            e[h] = e[h] + e[h - 1] * x;
        }
    }
    [e[1], e[2], e[3], e[4]]
}

/// A complexified vector `sum x_i e_i + sum y_a e_a` with at most two
/// nonzero `x_i` and at most two nonzero `y_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZVector<F> {
    split: BlockSplit,
    x: Vec<F>,
    y: Vec<F>,
}

impl<F: Scalar> ZVector<F> {
    pub fn new(split: BlockSplit, x: Vec<F>, y: Vec<F>) -> Result<Self> {
        if x.len() != split.d1 || y.len() != split.d2 {
            return Err(Error::Precondition(format!(
                "ZVector parts must have lengths ({}, {})",
                split.d1, split.d2
            )));
        }
        let nonzero = |v: &[F]| v.iter().filter(|c| !c.is_zero()).count();
        if nonzero(&x) > 2 || nonzero(&y) > 2 {
            return Err(Error::Precondition(
                "a ZVector has at most two nonzero entries per block".into(),
            ));
        }
        Ok(ZVector { split, x, y })
    }

    pub fn zero(split: BlockSplit) -> Self {
        ZVector {
            split,
            x: vec![F::zero(); split.d1],
            y: vec![F::zero(); split.d2],
        }
    }

    /// Places `x` in the leading coordinates of `W1` and `y` in the leading
    /// coordinates of `W2`.
    pub fn from_leading(split: BlockSplit, x: &[F], y: &[F]) -> Result<Self> {
        let mut z = Self::zero(split);
        if x.len() > split.d1 || y.len() > split.d2 {
            return Err(Error::Precondition("too many leading coordinates".into()));
        }
        z.x[..x.len()].copy_from_slice(x);
        z.y[..y.len()].copy_from_slice(y);
        Self::new(split, z.x, z.y)
    }

    pub fn split(&self) -> BlockSplit {
        self.split
    }

    pub fn x(&self) -> &[F] {
        &self.x
    }

    pub fn y(&self) -> &[F] {
        &self.y
    }

    pub fn sigma_x(&self) -> [F; 4] {
        elementary_symmetric(&self.x)
    }

    pub fn sigma_y(&self) -> [F; 4] {
        elementary_symmetric(&self.y)
    }

    /// Coordinates in `C^n`.
    pub fn full(&self) -> Vec<F> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    pub fn scaled(&self, t: F) -> Self {
        ZVector {
            split: self.split,
            x: self.x.iter().map(|&v| v * t).collect(),
            y: self.y.iter().map(|&v| v * t).collect(),
        }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(F) -> G) -> ZVector<G> {
        ZVector {
            split: self.split,
            x: self.x.iter().map(|&v| f(v)).collect(),
            y: self.y.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "x": self.x.iter().map(Scalar::to_value).collect::<Vec<_>>(),
            "y": self.y.iter().map(Scalar::to_value).collect::<Vec<_>>(),
        })
    }
}

/// `(A_1, A_2, A_3, B_1, B_2, B_3, C_1, C_2, C_3, C_4)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientVector10<F> {
    pub a: [F; 3],
    pub b: [F; 3],
    pub c: [F; 4],
}

pub const COEFFICIENT_NAMES: [&str; 10] = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3", "C4"];

impl<F: Scalar> CoefficientVector10<F> {
    pub fn zero() -> Self {
        Self::from_array([F::zero(); 10])
    }

    pub fn from_array(v: [F; 10]) -> Self {
        CoefficientVector10 {
            a: [v[0], v[1], v[2]],
            b: [v[3], v[4], v[5]],
            c: [v[6], v[7], v[8], v[9]],
        }
    }

    pub fn to_array(&self) -> [F; 10] {
        let mut out = [F::zero(); 10];
        out[..3].copy_from_slice(&self.a);
        out[3..6].copy_from_slice(&self.b);
        out[6..].copy_from_slice(&self.c);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (p, q) = (self.to_array(), other.to_array());
        Self::from_array(std::array::from_fn(|k| p[k] + q[k]))
    }

    pub fn scale(&self, s: F) -> Self {
        let p = self.to_array();
        Self::from_array(std::array::from_fn(|k| p[k] * s))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(F) -> G) -> CoefficientVector10<G> {
        CoefficientVector10::from_array(self.to_array().map(f))
    }

    pub fn to_json(&self) -> Value {
        let p = self.to_array();
        Value::Object(
            COEFFICIENT_NAMES
                .iter()
                .zip(p.iter())
                .map(|(k, v)| (k.to_string(), v.to_value()))
                .collect(),
        )
    }
}

fn fact<F: Scalar>(m: usize, minus: usize) -> F {
    F::from_int(factorial(m as i64 - minus as i64))
}

/// `(A_1, A_2, A_3)` for a block of size `d` against the other block size
/// `other`; the `B_h` are the same with the roles of the blocks exchanged.
fn block_coefficients<F: Scalar>(s1: F, s2: F, d: usize, other: usize) -> [F; 3] {
    let two = F::from_int(2);
    let four = F::from_int(4);
    let s1sq = s1 * s1;
    [
        fact::<F>(d, 1) * fact::<F>(other, 0) * (s1sq * s1sq - four * s1sq * s2 + two * s2 * s2),
        fact::<F>(d, 2) * fact::<F>(other, 0) * (s1sq * s2 - two * s2 * s2),
        fact::<F>(d, 2) * fact::<F>(other, 0) * (two * s2 * s2),
    ]
}

/// The ten coefficient functions of `X`, with `m! = 0` for `m < 0`.
pub fn abc_coefficients<F: Scalar>(z: &ZVector<F>) -> CoefficientVector10<F> {
    let (d1, d2) = (z.split.d1, z.split.d2);
    let [sx1, sx2, ..] = z.sigma_x();
    let [sy1, sy2, ..] = z.sigma_y();
    let two = F::from_int(2);
    let four = F::from_int(4);
    let nx = sx1 * sx1 - two * sx2;
    let ny = sy1 * sy1 - two * sy2;
    CoefficientVector10 {
        a: block_coefficients(sx1, sx2, d1, d2),
        b: block_coefficients(sy1, sy2, d2, d1),
        c: [
            fact::<F>(d1, 1) * fact::<F>(d2, 1) * two * nx * ny,
            fact::<F>(d1, 1) * fact::<F>(d2, 2) * four * nx * sy2,
            fact::<F>(d1, 2) * fact::<F>(d2, 1) * four * sx2 * ny,
            fact::<F>(d1, 2) * fact::<F>(d2, 2) * four * sx2 * sy2,
        ],
    }
}

/// `d1 A_1 + d1(d1-1) A_3 + d2 B_1 + d2(d2-1) B_3 + d1 d2 C_1`.
pub fn rhs_combination<F: Scalar>(split: BlockSplit, v: &CoefficientVector10<F>) -> F {
    let (d1, d2) = (split.d1 as i64, split.d2 as i64);
    F::from_int(d1) * v.a[0]
        + F::from_int(d1 * (d1 - 1)) * v.a[2]
        + F::from_int(d2) * v.b[0]
        + F::from_int(d2 * (d2 - 1)) * v.b[2]
        + F::from_int(d1 * d2) * v.c[0]
}

/// `H d1! d2! |X|^4`, computed both from the coefficient functions and from
/// `sigma_1^2 - 2 sigma_2` on each block; the two must agree.
pub fn rhs_identity_value<F: Scalar>(z: &ZVector<F>, h: F) -> Result<F> {
    let split = z.split;
    let via_coefficients = h * rhs_combination(split, &abc_coefficients(z));
    let [sx1, sx2, ..] = z.sigma_x();
    let [sy1, sy2, ..] = z.sigma_y();
    let two = F::from_int(2);
    let norm = sx1 * sx1 - two * sx2 + sy1 * sy1 - two * sy2;
    let direct = h * fact::<F>(split.d1, 0) * fact::<F>(split.d2, 0) * norm * norm;
    if !via_coefficients.approx_eq(&direct, crate::scalar::DEFAULT_TOLERANCE * (1.0 + direct.modulus())) {
        return Err(Error::IdentityViolation(format!(
            "H d1! d2! |X|^4 = {} but the coefficient combination gives {}",
            direct.to_value(),
            via_coefficients.to_value()
        )));
    }
    Ok(direct)
}

/// A seeded element of `Z` with small Gaussian-rational entries in at most two
/// random positions of each block.
pub fn random_zvector(split: BlockSplit, rng: &mut impl Rng) -> ZVector<GaussianRational> {
    let mut fill = |len: usize| {
        let mut v = vec![GaussianRational::zero(); len];
        for _ in 0..2 {
            let slot = rng.random_range(0..len);
            v[slot] = small_gaussian(rng);
        }
        v
    };
    let x = fill(split.d1);
    let y = fill(split.d2);
    ZVector { split, x, y }
}
