//! Algebraic curvature tensors and their basic contractions.
//!
//! Sign convention: the constant-curvature tensor of curvature `k` is
//! `R(X,Y,Z,W) = k(<X,Z><Y,W> - <X,W><Y,Z>)`, the Ricci tensor is
//! `rho(u,v) = sum_m R(u,e_m,v,e_m)` and the Jacobi operator has matrix
//! `(R_X)_{uv} = R(e_u,X,e_v,X)`, so `Tr R_X = rho(X,X)` is positive on the
//! round sphere. The vector-valued form is `<R(X,Y)Z, W> = R(X,Y,Z,W)`.
//!
//! Indices are 0-based. Storage is a dense `n^4` array.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::{Field, RealScalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<F> {
    dim: usize,
    data: Vec<F>,
}

/// One failed curvature identity found by [`CurvatureTensor::validate_symmetries`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryViolation {
    pub identity: SymmetryIdentity,
    pub index: [usize; 4],
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryIdentity {
    /// `R(i,j,k,l) = -R(j,i,k,l)`
    FirstPairAntisymmetry,
    /// `R(i,j,k,l) = -R(i,j,l,k)`
    SecondPairAntisymmetry,
    /// `R(i,j,k,l) = R(k,l,i,j)`
    PairSymmetry,
    /// `R(i,j,k,l) + R(j,k,i,l) + R(k,i,j,l) = 0`
    Bianchi,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.violations.iter().map(|v| v.residual).fold(0.0, f64::max)
    }
}

impl<F: Scalar> CurvatureTensor<F> {
    pub fn zero(dim: usize) -> Self {
        CurvatureTensor {
            dim,
            data: vec![F::zero(); dim.pow(4)],
        }
    }

    /// Builds a tensor entry by entry. No symmetry is imposed; use
    /// [`validate_symmetries`](Self::validate_symmetries) or
    /// [`validated`](Self::validated) on untrusted input.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        CurvatureTensor { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        F::FIELD
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> F {
        self.data[self.offset(i, j, k, l)]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: F) {
        let o = self.offset(i, j, k, l);
        self.data[o] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    /// Constant sectional curvature `kappa`:
    /// `R(X,Y,Z,W) = kappa(<X,Z><Y,W> - <X,W><Y,Z>)`.
    pub fn constant_curvature(dim: usize, kappa: F) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension {
                dim,
                reason: "constant curvature needs n >= 2".into(),
            });
        }
        Ok(Self::constant_curvature_unchecked(dim, kappa))
    }

    pub(crate) fn constant_curvature_unchecked(dim: usize, kappa: F) -> Self {
        let delta = |a: usize, b: usize| if a == b { F::one() } else { F::zero() };
        Self::from_fn(dim, |i, j, k, l| {
            kappa * (delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k))
        })
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(F) -> G) -> CurvatureTensor<G> {
        CurvatureTensor {
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, s: F) -> Self {
        self.map(|v| v * s)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(F, F) -> F) -> Self {
        CurvatureTensor {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::InvalidDimension {
                dim: other.dim,
                reason: format!("expected dimension {}", self.dim),
            });
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn is_zero_tensor(&self, tol: f64) -> bool {
        self.data.iter().all(|v| v.is_negligible(tol))
    }

    /// Exhaustive scan of the pair (anti)symmetries and the first Bianchi
    /// identity. Exact fields report every nonzero residual; float fields
    /// report residuals above `tol`.
    pub fn validate_symmetries(&self, tol: f64) -> SymmetryReport {
        let n = self.dim;
        let mut violations = Vec::new();
        let mut push = |identity, index, residual: F| {
            if !residual.is_negligible(tol) {
                violations.push(SymmetryViolation {
                    identity,
                    index,
                    residual: residual.modulus(),
                });
            }
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        let idx = [i, j, k, l];
                        push(
                            SymmetryIdentity::FirstPairAntisymmetry,
                            idx,
                            r + self.get(j, i, k, l),
                        );
                        push(
                            SymmetryIdentity::SecondPairAntisymmetry,
                            idx,
                            r + self.get(i, j, l, k),
                        );
                        push(SymmetryIdentity::PairSymmetry, idx, r - self.get(k, l, i, j));
                        push(
                            SymmetryIdentity::Bianchi,
                            idx,
                            r + self.get(j, k, i, l) + self.get(k, i, j, l),
                        );
                    }
                }
            }
        }
        SymmetryReport { violations }
    }

    /// Returns `self` if it passes [`validate_symmetries`](Self::validate_symmetries).
    pub fn validated(self, tol: f64) -> Result<Self> {
        let report = self.validate_symmetries(tol);
        match report.violations.first() {
            None => Ok(self),
            Some(v) => Err(Error::Precondition(format!(
                "{:?} violated at {:?} (residual {:e})",
                v.identity, v.index, v.residual
            ))),
        }
    }

    /// `rho(u,v) = sum_m R(u,e_m,v,e_m)`.
    pub fn ricci(&self) -> SymmetricBilinear<F> {
        let n = self.dim;
        let data = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| F::sum_iter((0..n).map(|m| self.get(u, m, v, m))))
                    .collect()
            })
            .collect();
        SymmetricBilinear { dim: n, data }
    }

    /// The matrix `B[m][w] = R(X, e_m, Y, e_w)`, i.e. the components of
    /// `R(X,e_m)Y`. With `Y = X` this is the Jacobi matrix.
    pub fn mixed_jacobi(&self, x: &[F], y: &[F]) -> Matrix<F> {
        let n = self.dim;
        let xs: Vec<(usize, F)> = support(x);
        let ys: Vec<(usize, F)> = support(y);
        let mut out = vec![vec![F::zero(); n]; n];
        for (m, row) in out.iter_mut().enumerate() {
            for (w, cell) in row.iter_mut().enumerate() {
                let mut acc = F::zero();
                for &(p, xp) in &xs {
                    for &(q, yq) in &ys {
                        acc = acc + xp * yq * self.get(p, m, q, w);
                    }
                }
                *cell = acc;
            }
        }
        out
    }

    /// Jacobi operator `(R_X)_{uv} = R(e_u, X, e_v, X)`.
    pub fn jacobi(&self, x: &[F]) -> JacobiOperator<F> {
        assert_eq!(x.len(), self.dim, "vector length must match dimension");
        let n = self.dim;
        let xs = support(x);
        let mut matrix = vec![vec![F::zero(); n]; n];
        for u in 0..n {
            for v in u..n {
                let mut acc = F::zero();
                for &(p, xp) in &xs {
                    for &(q, xq) in &xs {
                        acc = acc + xp * xq * self.get(u, p, v, q);
                    }
                }
                matrix[u][v] = acc;
                matrix[v][u] = acc;
            }
        }
        JacobiOperator {
            base: x.to_vec(),
            matrix: SymmetricBilinear { dim: n, data: matrix },
        }
    }

    /// `Tr(R_X^2)`, the quartic studied by the 2-stein condition.
    pub fn trace_jacobi_squared(&self, x: &[F]) -> F {
        self.jacobi(x).trace_of_square()
    }

    /// `sum_m <R(X,e_m)X, R(X,e_m)Y>`.
    pub fn jacobi_pairing(&self, x: &[F], y: &[F]) -> F {
        let a = self.mixed_jacobi(x, x);
        let b = self.mixed_jacobi(x, y);
        F::sum_iter(a.iter().zip(&b).map(|(ra, rb)| dot(ra, rb)))
    }

    /// `cR = R - 2 R_1` with `R_1` the unit constant-curvature tensor.
    pub fn shift(&self) -> Self {
        self.shift_by(-F::from_int(2))
    }

    /// Inverse of [`shift`](Self::shift).
    pub fn unshift(&self) -> Self {
        self.shift_by(F::from_int(2))
    }

    fn shift_by(&self, amount: F) -> Self {
        let one = Self::constant_curvature_unchecked(self.dim, amount);
        self.zip_with(&one, |a, b| a + b)
    }

    /// Components in a new orthonormal basis: `R'(a,b,c,d) = sum R(p,q,r,s)
    /// Q[p][a] Q[q][b] Q[r][c] Q[s][d]`, where the columns of `q` are the new
    /// basis vectors.
    pub fn change_basis(&self, q: &Matrix<F>) -> Self {
        let n = self.dim;
        assert_eq!(q.len(), n);
        let mut cur = self.data.clone();
        // contract one slot at a time; each pass moves the contracted slot
        // to the back, so after four passes the order is restored
        for _ in 0..4 {
            let mut next = vec![F::zero(); n.pow(4)];
            for p in 0..n {
                for rest in 0..n.pow(3) {
                    let v = cur[p * n.pow(3) + rest];
                    if v.is_zero() {
                        continue;
                    }
                    for a in 0..n {
                        let c = q[p][a];
                        if c.is_zero() {
                            continue;
                        }
                        let o = rest * n + a;
                        next[o] = next[o] + v * c;
                    }
                }
            }
            cur = next;
        }
        CurvatureTensor { dim: n, data: cur }
    }

    /// Relabels coordinates: new index `a` is old index `perm[a]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        Self::from_fn(self.dim, |i, j, k, l| self.get(perm[i], perm[j], perm[k], perm[l]))
    }
}

impl<F: RealScalar> CurvatureTensor<F> {
    pub fn complexify(&self) -> CurvatureTensor<F::Complex> {
        self.map(RealScalar::lift)
    }
}

fn support<F: Scalar>(x: &[F]) -> Vec<(usize, F)> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, &v)| (i, v))
        .collect()
}

/// The orbit of an index quadruple under the 8-element group generated by
/// the pair antisymmetries and the pair swap, with `true` for `+` sign.
pub(crate) fn orbit(idx: [usize; 4]) -> [([usize; 4], bool); 8] {
    let [i, j, k, l] = idx;
    [
        ([i, j, k, l], true),
        ([j, i, k, l], false),
        ([i, j, l, k], false),
        ([j, i, l, k], true),
        ([k, l, i, j], true),
        ([l, k, i, j], false),
        ([k, l, j, i], false),
        ([l, k, j, i], true),
    ]
}

/// Symmetric `n x n` bilinear form, e.g. the Ricci tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricBilinear<F> {
    dim: usize,
    data: Matrix<F>,
}

impl<F: Scalar> SymmetricBilinear<F> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> F {
        self.data[u][v]
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.data
    }

    pub fn trace(&self) -> F {
        F::sum_iter((0..self.dim).map(|i| self.data[i][i]))
    }

    /// `sum_{uv} M_uv M_vu`.
    pub fn trace_of_square(&self) -> F {
        F::sum_iter(
            (0..self.dim)
                .flat_map(|u| (0..self.dim).map(move |v| (u, v)))
                .map(|(u, v)| self.data[u][v] * self.data[v][u]),
        )
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.data.iter().map(|row| dot(row, x)).collect()
    }

    /// `B(x, y)` with complex-bilinear extension.
    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        dot(x, &self.apply(y))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|u| (0..u).all(|v| self.data[u][v].approx_eq(&self.data[v][u], tol)))
    }
}

/// `R_X` together with its base vector.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiOperator<F> {
    base: Vec<F>,
    matrix: SymmetricBilinear<F>,
}

impl<F: Scalar> JacobiOperator<F> {
    pub fn base(&self) -> &[F] {
        &self.base
    }

    pub fn matrix(&self) -> &SymmetricBilinear<F> {
        &self.matrix
    }

    pub fn get(&self, u: usize, v: usize) -> F {
        self.matrix.get(u, v)
    }

    pub fn trace(&self) -> F {
        self.matrix.trace()
    }

    pub fn trace_of_square(&self) -> F {
        self.matrix.trace_of_square()
    }

    /// `R_X X`, which vanishes for a valid tensor.
    pub fn applied_to_base(&self) -> Vec<F> {
        self.matrix.apply(&self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn constant_curvature_components() {
        let r = CurvatureTensor::constant_curvature(5, q(1)).unwrap();
        assert_eq!(r.get(0, 1, 0, 1), q(1));
        assert_eq!(r.get(0, 1, 1, 0), q(-1));
        assert_eq!(r.get(0, 1, 2, 3), q(0));
        assert!(r.validate_symmetries(0.0).is_empty());
        assert!(CurvatureTensor::constant_curvature(5, q(0)).unwrap().is_zero_tensor(0.0));
    }

    #[test]
    fn constant_curvature_rejects_small_dimension() {
        assert!(matches!(
            CurvatureTensor::constant_curvature(1, q(1)),
            Err(Error::InvalidDimension { dim: 1, .. })
        ));
    }

    #[test]
    fn ricci_of_constant_curvature() {
        let rho = CurvatureTensor::constant_curvature(3, q(2)).unwrap().ricci();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(rho.get(u, v), if u == v { q(4) } else { q(0) });
            }
        }
        let rho5 = CurvatureTensor::constant_curvature(5, q(1)).unwrap().ricci();
        assert_eq!(rho5.trace(), q(20));
        let zero = CurvatureTensor::<Rational>::zero(4).ricci();
        assert!(zero.matrix().iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn jacobi_of_constant_curvature_is_diagonal() {
        let kappa = Rational::new(3, 2);
        let r = CurvatureTensor::constant_curvature(5, kappa).unwrap();
        let mut x = vec![q(0); 5];
        x[0] = q(1);
        let j = r.jacobi(&x);
        for u in 0..5 {
            for v in 0..5 {
                let expected = if u == v && u != 0 { kappa } else { q(0) };
                assert_eq!(j.get(u, v), expected);
            }
        }
        assert!(r.jacobi(&[q(0); 5]).matrix().matrix().iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn unset_antisymmetric_partner_is_reported() {
        let t = CurvatureTensor::from_fn(3, |i, j, k, l| {
            if (i, j, k, l) == (0, 1, 0, 1) {
                q(1)
            } else {
                q(0)
            }
        });
        let report = t.validate_symmetries(0.0);
        assert!(report.violations.iter().any(|v| v.index == [0, 1, 1, 0]
            && v.identity == SymmetryIdentity::SecondPairAntisymmetry));
    }

    #[test]
    fn shift_examples() {
        let two = CurvatureTensor::constant_curvature(5, q(2)).unwrap();
        assert!(two.shift().is_zero_tensor(0.0));
        let k = CurvatureTensor::constant_curvature(4, Rational::new(7, 3)).unwrap();
        assert_eq!(k.shift(), CurvatureTensor::constant_curvature(4, Rational::new(1, 3)).unwrap());
        let zero = CurvatureTensor::<Rational>::zero(5);
        assert_eq!(zero.shift(), CurvatureTensor::constant_curvature(5, q(-2)).unwrap());
        assert_eq!(k.shift().unshift(), k);
    }

    #[test]
    fn permutation_and_basis_change_agree() {
        let r = CurvatureTensor::from_fn(3, |i, j, k, l| q((i * 27 + j * 9 + k * 3 + l) as i64));
        let perm = [2, 0, 1];
        let mut p = vec![vec![q(0); 3]; 3];
        for (new, &old) in perm.iter().enumerate() {
            p[old][new] = q(1);
        }
        assert_eq!(r.permute(&perm), r.change_basis(&p));
    }
}
