//! Reference curvature tensors and seeded random generators.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::AnyTensor;
use crate::linalg::Matrix;
use crate::sampling;
use crate::scalar::{Field, Rational, RealScalar, Scalar, DEFAULT_TOLERANCE};
use crate::tensor::CurvatureTensor;

fn delta<F: Scalar>(a: usize, b: usize) -> F {
    if a == b {
        F::one()
    } else {
        F::zero()
    }
}

/// Sum over a family of complex structures `J` (given as `<J e_i, e_k>`)
/// of the Kähler-type curvature terms, plus the constant-curvature part.
fn space_form<F: Scalar>(n: usize, c: F, structures: &[Matrix<F>]) -> CurvatureTensor<F> {
    let quarter = c / F::from_int(4);
    CurvatureTensor::from_fn(n, |i, j, k, l| {
        let mut v = delta::<F>(i, k) * delta(j, l) - delta::<F>(i, l) * delta(j, k);
        for jm in structures {
            v = v + jm[i][k] * jm[j][l] - jm[i][l] * jm[j][k]
                + F::from_int(2) * jm[i][j] * jm[k][l];
        }
        quarter * v
    })
}

/// Complex space form of holomorphic sectional curvature `c` on `C^m`,
/// with `J e_{2k} = e_{2k+1}`.
pub fn complex_space_form<F: Scalar>(m: usize, c: F) -> Result<CurvatureTensor<F>> {
    if m == 0 {
        return Err(Error::InvalidDimension {
            dim: 0,
            reason: "complex dimension must be at least 1".into(),
        });
    }
    let n = 2 * m;
    let mut j = vec![vec![F::zero(); n]; n];
    for k in 0..m {
        j[2 * k][2 * k + 1] = F::one();
        j[2 * k + 1][2 * k] = -F::one();
    }
    Ok(space_form(n, c, &[j]))
}

/// Quaternionic space form on `H^q`; the three structures are left
/// multiplication by `i`, `j`, `k` in the basis `(1, i, j, k)` of each factor.
pub fn quaternionic_space_form<F: Scalar>(q: usize, c: F) -> Result<CurvatureTensor<F>> {
    if q == 0 {
        return Err(Error::InvalidDimension {
            dim: 0,
            reason: "quaternionic dimension must be at least 1".into(),
        });
    }
    let n = 4 * q;
    // images of the basis (1, i, j, k) under left multiplication: (target, sign)
    let tables: [[(usize, i64); 4]; 3] = [
        [(1, 1), (0, -1), (3, 1), (2, -1)],
        [(2, 1), (3, -1), (0, -1), (1, 1)],
        [(3, 1), (2, 1), (1, -1), (0, -1)],
    ];
    let structures: Vec<Matrix<F>> = tables
        .iter()
        .map(|table| {
            let mut jm = vec![vec![F::zero(); n]; n];
            for block in 0..q {
                for (src, &(dst, sign)) in table.iter().enumerate() {
                    jm[4 * block + src][4 * block + dst] = F::from_int(sign);
                }
            }
            jm
        })
        .collect();
    Ok(space_form(n, c, &structures))
}

type M3<F> = [[F; 3]; 3];

fn m3_mul<F: Scalar>(a: &M3<F>, b: &M3<F>) -> M3<F> {
    let mut out = [[F::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = F::sum_iter((0..3).map(|k| a[i][k] * b[k][j]));
        }
    }
    out
}

fn m3_bracket<F: Scalar>(a: &M3<F>, b: &M3<F>) -> M3<F> {
    let ab = m3_mul(a, b);
    let ba = m3_mul(b, a);
    let mut out = [[F::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

fn m3_trace<F: Scalar>(a: &M3<F>) -> F {
    a[0][0] + a[1][1] + a[2][2]
}

/// Orthonormal basis of the traceless symmetric 3x3 matrices under
/// `<X,Y> = scale * tr(XY)`.
///
/// With `t = sqrt(6 * scale)` the basis is `(3/t) * b_m` where
/// `b_0..b_3 = (1/3) * Q * (E01, E02, E12, diag(1,-1,0))` for the
/// orthogonal-up-to-`sqrt 3` matrix
/// `Q = [[1,-1,-1,0],[1,1,0,1],[1,0,1,-1],[0,-1,1,1]]`, and
/// `b_4 = diag(1,1,-2)/3`. `E_pq` is the symmetric unit with ones at
/// `(p,q)` and `(q,p)`. Exact fields need `6 * scale` to be a square.
pub fn su3_so3_basis<F: RealScalar>(scale: F) -> Result<[M3<F>; 5]> {
    if scale <= F::zero() {
        return Err(Error::Precondition("su3_so3 scale must be positive".into()));
    }
    let t = (F::from_int(6) * scale).try_sqrt().ok_or_else(|| {
        Error::Unsupported(
            "6 * scale must be a rational square for an exact su3_so3 basis; use a float field".into(),
        )
    })?;
    let z = F::zero();
    let o = F::one();
    let units: [M3<F>; 4] = [
        [[z, o, z], [o, z, z], [z, z, z]],
        [[z, z, o], [z, z, z], [o, z, z]],
        [[z, z, z], [z, z, o], [z, o, z]],
        [[o, z, z], [z, -o, z], [z, z, z]],
    ];
    let q: [[i64; 4]; 4] = [[1, -1, -1, 0], [1, 1, 0, 1], [1, 0, 1, -1], [0, -1, 1, 1]];
    let norm = F::one() / t; // (3/t) * (1/3)
    let mut basis = [[[z; 3]; 3]; 5];
    for (m, row) in q.iter().enumerate() {
        for (c, &coef) in row.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    basis[m][i][j] = basis[m][i][j] + F::from_int(coef) * norm * units[c][i][j];
                }
            }
        }
    }
    basis[4] = [[norm, z, z], [z, norm, z], [z, z, -F::from_int(2) * norm]];
    Ok(basis)
}

/// Curvature of `SU(3)/SO(3)` at the base point, with
/// `R(X,Y)Z = -[[X,Y],Z]` and `<X,Y> = scale * tr(XY)`.
/// Components scale as `1/scale`.
pub fn su3_so3_tensor<F: RealScalar>(scale: F) -> Result<CurvatureTensor<F>> {
    let b = su3_so3_basis(scale)?;
    Ok(CurvatureTensor::from_fn(5, |p, q, r, s| {
        let xyz = m3_bracket(&m3_bracket(&b[p], &b[q]), &b[r]);
        -scale * m3_trace(&m3_mul(&xyz, &b[s]))
    }))
}

/// Constant curvature `k1` on the first `p` coordinates and `k2` on the
/// remaining `q`, with all mixed components zero.
pub fn product_sphere_tensor<F: Scalar>(p: usize, q: usize, k1: F, k2: F) -> Result<CurvatureTensor<F>> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidDimension {
            dim: p + q,
            reason: "both sphere factors need dimension >= 2".into(),
        });
    }
    let block = |t: usize| t >= p;
    Ok(CurvatureTensor::from_fn(p + q, |i, j, k, l| {
        let b = block(i);
        if block(j) != b || block(k) != b || block(l) != b {
            return F::zero();
        }
        let kappa = if b { k2 } else { k1 };
        kappa * (delta::<F>(i, k) * delta(j, l) - delta::<F>(i, l) * delta(j, k))
    }))
}

/// Projection of a raw 4-array onto algebraic curvature tensors: average
/// over the 8-element pair-symmetry group, then remove the cyclic part.
pub fn curvature_projection(raw: &CurvatureTensor<Rational>) -> CurvatureTensor<Rational> {
    let n = raw.dim();
    let eighth = Rational::new(1, 8);
    let b = CurvatureTensor::from_fn(n, |p, q, r, s| {
        let g = |a, b, c, d| raw.get(a, b, c, d);
        (g(p, q, r, s) - g(q, p, r, s) - g(p, q, s, r) + g(q, p, s, r) + g(r, s, p, q)
            - g(s, r, p, q)
            - g(r, s, q, p)
            + g(s, r, q, p))
            * eighth
    });
    let third = Rational::new(1, 3);
    CurvatureTensor::from_fn(n, |p, q, r, s| {
        let v = b.get(p, q, r, s);
        v - (v + b.get(q, r, p, s) + b.get(r, p, q, s)) * third
    })
}

fn raw_integer_array(n: usize, rng: &mut impl Rng) -> CurvatureTensor<Rational> {
    CurvatureTensor::from_fn(n, |_, _, _, _| Rational::from_int(rng.random_range(-5..=5)))
}

/// Seeded random algebraic curvature tensor with rational entries.
pub fn random_tensor(n: usize, seed: u64) -> Result<CurvatureTensor<Rational>> {
    if n < 2 {
        return Err(Error::InvalidDimension {
            dim: n,
            reason: "random tensors need n >= 2".into(),
        });
    }
    Ok(curvature_projection(&raw_integer_array(n, &mut sampling::rng(seed))))
}

/// Seeded random tensor satisfying the block conditions
/// `R_ijka = R_ijab = R_iabc = 0` for the split of `0..d1` and `d1..d1+d2`.
///
/// Starts from [`random_tensor`], keeps the pure blocks, zeroes every orbit
/// with one or three `W2` indices or with a pair inside one block, and
/// symmetrizes `K_iajb = R(i,a,j,b)` in `i <-> j` so that Bianchi still holds.
pub fn random_block_tensor(d1: usize, d2: usize, seed: u64) -> Result<CurvatureTensor<Rational>> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidDimension {
            dim: d1 + d2,
            reason: "both blocks must be nonempty".into(),
        });
    }
    let n = d1 + d2;
    let r = random_tensor(n, seed)?;
    let w2 = |t: usize| t >= d1;
    let half = Rational::new(1, 2);
    let mut out = CurvatureTensor::from_fn(n, |p, q, s, t| {
        let count = [p, q, s, t].iter().filter(|&&x| w2(x)).count();
        if count == 0 || count == 4 {
            r.get(p, q, s, t)
        } else {
            Rational::from_int(0)
        }
    });
    for i in 0..d1 {
        for j in 0..d1 {
            for a in d1..n {
                for b in d1..n {
                    let k = (r.get(i, a, j, b) + r.get(j, a, i, b)) * half;
                    out.set(i, a, j, b, k);
                    out.set(a, i, b, j, k);
                    out.set(i, a, b, j, -k);
                    out.set(a, i, j, b, -k);
                }
            }
        }
    }
    Ok(out)
}

/// A rational-valued parameter given in JSON as `"3/2"`, `"0.5"` or an integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Param(pub Rational);

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let parsed = match &v {
            Value::Number(n) if !n.is_i64() => n
                .as_f64()
                .map(|x| x.to_string())
                .ok_or_else(|| serde::de::Error::custom("invalid number"))
                .and_then(|s| s.parse::<Rational>().map_err(serde::de::Error::custom)),
            other => Rational::parse_value(other).map_err(serde::de::Error::custom),
        }?;
        Ok(Param(parsed))
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// A model and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Model {
    Constant { n: usize, kappa: Param },
    ComplexSpaceForm { m: usize, c: Param },
    QuaternionicSpaceForm { q: usize, c: Param },
    Su3So3 {
        #[serde(default = "default_su3_scale")]
        scale: Param,
    },
    ProductSpheres { p: usize, q: usize, kappa1: Param, kappa2: Param },
    Random { n: usize },
    RandomBlock { d1: usize, d2: usize },
}

fn default_su3_scale() -> Param {
    Param(Rational::new(3, 2))
}

/// `{"kind": ..., "params": {...}, "seed": k, "field": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooSpec {
    #[serde(flatten)]
    pub model: Model,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_field")]
    pub field: Field,
}

fn default_field() -> Field {
    Field::Rational
}

impl ZooSpec {
    pub fn new(model: Model) -> Self {
        ZooSpec {
            model,
            seed: 0,
            field: Field::Rational,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the tensor in rational arithmetic and converts it to the
    /// requested field. `su3_so3` with a non-square `6 * scale` is built
    /// directly in floats.
    pub fn generate(&self) -> Result<AnyTensor> {
        let exact = match &self.model {
            Model::Constant { n, kappa } => CurvatureTensor::constant_curvature(*n, kappa.0),
            Model::ComplexSpaceForm { m, c } => complex_space_form(*m, c.0),
            Model::QuaternionicSpaceForm { q, c } => quaternionic_space_form(*q, c.0),
            Model::Su3So3 { scale } => match su3_so3_tensor(scale.0) {
                Err(Error::Unsupported(_)) if !self.field.is_exact() => {
                    let t = su3_so3_tensor(scale.0.to_f64())?;
                    return Ok(match self.field {
                        Field::C64 => AnyTensor::C64(t.complexify()),
                        _ => AnyTensor::F64(t),
                    });
                }
                other => other,
            },
            Model::ProductSpheres { p, q, kappa1, kappa2 } => {
                product_sphere_tensor(*p, *q, kappa1.0, kappa2.0)
            }
            Model::Random { n } => random_tensor(*n, self.seed),
            Model::RandomBlock { d1, d2 } => random_block_tensor(*d1, *d2, self.seed),
        }?;
        let out = convert(&exact, self.field);
        debug_assert!(match &out {
            AnyTensor::F64(t) => t.validate_symmetries(DEFAULT_TOLERANCE).is_empty(),
            _ => true,
        });
        Ok(out)
    }
}

/// Converts a rational tensor to any field.
pub fn convert(t: &CurvatureTensor<Rational>, field: Field) -> AnyTensor {
    match field {
        Field::Rational => AnyTensor::Rational(t.clone()),
        Field::GaussianRational => AnyTensor::GaussianRational(t.complexify()),
        Field::F64 => AnyTensor::F64(t.map(|v| v.to_f64())),
        Field::C64 => AnyTensor::C64(t.map(|v| v.to_f64()).complexify()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn complex_space_form_of_dimension_one_is_constant() {
        let c = Rational::new(5, 2);
        assert_eq!(
            complex_space_form(1, c).unwrap(),
            CurvatureTensor::constant_curvature(2, c).unwrap()
        );
    }

    #[test]
    fn complex_space_form_is_not_constant_curvature() {
        let r = complex_space_form(2, q(4)).unwrap();
        assert!(r.validate_symmetries(0.0).is_empty());
        assert_eq!(r.get(0, 1, 0, 1), q(4));
        assert_eq!(r.get(0, 2, 0, 2), q(1));
    }

    #[test]
    fn quaternionic_space_form_is_valid() {
        let r = quaternionic_space_form(2, q(4)).unwrap();
        assert!(r.validate_symmetries(0.0).is_empty());
        assert!(quaternionic_space_form(1, q(0)).unwrap().is_zero_tensor(0.0));
        // sectional curvature 4 on quaternionic lines, 1 across them
        assert_eq!(r.get(0, 3, 0, 3), q(4));
        assert_eq!(r.get(0, 4, 0, 4), q(1));
    }

    #[test]
    fn su3_basis_is_orthonormal() {
        let scale = Rational::new(3, 2);
        let b = su3_so3_basis(scale).unwrap();
        for i in 0..5 {
            assert_eq!(m3_trace(&b[i]), q(0));
            for j in 0..5 {
                let g = scale * m3_trace(&m3_mul(&b[i], &b[j]));
                assert_eq!(g, if i == j { q(1) } else { q(0) });
            }
        }
        assert!(matches!(su3_so3_basis(q(1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn su3_tensor_is_valid_and_scales_inversely() {
        let r = su3_so3_tensor(Rational::new(3, 2)).unwrap();
        assert!(r.validate_symmetries(0.0).is_empty());
        let r6 = su3_so3_tensor(Rational::from_int(6)).unwrap();
        assert_eq!(r6.scaled(q(4)), r);
    }

    #[test]
    fn random_tensors_are_deterministic_and_valid() {
        let a = random_tensor(5, 3).unwrap();
        assert_eq!(a, random_tensor(5, 3).unwrap());
        assert_ne!(a, random_tensor(5, 4).unwrap());
        assert!(a.validate_symmetries(0.0).is_empty());
        assert!(!a.is_zero_tensor(0.0));
        let b = random_block_tensor(2, 3, 7).unwrap();
        assert!(b.validate_symmetries(0.0).is_empty());
    }

    #[test]
    fn projection_is_idempotent() {
        let a = random_tensor(4, 9).unwrap();
        assert_eq!(curvature_projection(&a), a);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ZooSpec::from_json(
            r#"{"kind":"random_block","params":{"d1":2,"d2":3},"seed":7}"#,
        )
        .unwrap();
        assert_eq!(spec.model, Model::RandomBlock { d1: 2, d2: 3 });
        assert_eq!(spec.seed, 7);
        let constant =
            ZooSpec::from_json(r#"{"kind":"constant","params":{"n":5,"kappa":"3/2"}}"#).unwrap();
        assert_eq!(
            constant.generate().unwrap(),
            AnyTensor::Rational(CurvatureTensor::constant_curvature(5, Rational::new(3, 2)).unwrap())
        );
        let float = ZooSpec::from_json(r#"{"kind":"su3_so3","params":{"scale":1},"field":"f64"}"#)
            .unwrap()
            .generate()
            .unwrap();
        assert_eq!(float.field(), Field::F64);
    }
}
