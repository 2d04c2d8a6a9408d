//! Scalar fields the tensors are defined over.
//!
//! Four backends are provided: exact rationals, exact Gaussian rationals
//! (`a + bi` with rational `a`, `b`), `f64` and `Complex<f64>`. Exact
//! backends compare with `==`; float backends compare against a tolerance.
//!
//! [`Rational`] is a checked `Ratio<i128>`. It is `Copy`, which keeps the
//! tensor kernels free of clones, and it panics on overflow instead of
//! wrapping. Every value produced by the generators in this crate stays far
//! below the `i128` range.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Default absolute tolerance for float backends.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Tag identifying the scalar backend of a tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rational,
    GaussianRational,
    F64,
    C64,
}

impl Field {
    pub fn is_exact(self) -> bool {
        matches!(self, Field::Rational | Field::GaussianRational)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Field::GaussianRational | Field::C64)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::GaussianRational => "gaussian_rational",
            Field::F64 => "f64",
            Field::C64 => "c64",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "gaussian_rational" => Ok(Field::GaussianRational),
            "f64" => Ok(Field::F64),
            "c64" => Ok(Field::C64),
            other => Err(Error::Malformed(format!("unknown field `{other}`"))),
        }
    }
}

/// Ring/field operations shared by every backend.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const FIELD: Field;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Image of an exact rational in this field.
    fn from_rational(q: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Absolute value (modulus for complex backends) as `f64`.
    fn modulus(&self) -> f64;

    fn conj(&self) -> Self;

    fn is_exact() -> bool {
        Self::FIELD.is_exact()
    }

    /// Exact backends ignore `tol` and test for zero.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.modulus() <= tol
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).is_negligible(tol)
    }

    fn parse_value(v: &Value) -> Result<Self>;

    fn to_value(&self) -> Value;

    fn sum_iter<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        iter.into_iter().fold(Self::zero(), |acc, v| acc + v)
    }
}

/// Real backends: ordered, with an associated complexification.
pub trait RealScalar: Scalar + PartialOrd {
    type Complex: ComplexScalar<Real = Self>;

    fn to_f64(&self) -> f64;

    /// Best representable approximation of `x`.
    fn from_f64(x: f64) -> Self;

    fn lift(self) -> Self::Complex;

    /// Square root when it exists in the field (always for floats of
    /// non-negative values; only for perfect squares for rationals).
    fn try_sqrt(&self) -> Option<Self>;
}

/// Complex backends, with the complex-bilinear (not sesquilinear)
/// arithmetic used by the complexified trace identities.
pub trait ComplexScalar: Scalar {
    type Real: RealScalar<Complex = Self>;

    fn new(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;

    fn i() -> Self {
        Self::new(Self::Real::zero(), Self::Real::one())
    }

    fn from_gaussian(z: GaussianRational) -> Self {
        Self::new(Self::Real::from_rational(z.re), Self::Real::from_rational(z.im))
    }
}

// ---------------------------------------------------------------------------
// Rational

/// Exact rational number backed by a checked `Ratio<i128>`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

pub type GaussianRational = Complex<Rational>;
pub type C64 = Complex<f64>;

#[cold]
fn overflow(op: &str) -> ! {
    panic!("exact rational overflow in {op} (i128 range exceeded)")
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q` and finite decimals such as `-1.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("invalid rational `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Rational::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
                return Err(bad());
            }
            let negative = int.trim_start().starts_with('-');
            let int_part: i128 = if int.is_empty() || int == "-" || int == "+" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let scale = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            let frac_part: i128 = frac.parse().map_err(|_| bad())?;
            let magnitude = int_part
                .abs()
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_part))
                .ok_or_else(bad)?;
            let num = if negative { -magnitude } else { magnitude };
            return Ok(Rational::new(num, scale));
        }
        let n: i128 = s.parse().map_err(|_| bad())?;
        Ok(Rational::new(n, 1))
    }
}

impl Add for Rational {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_add(rhs.numer()) {
                Some(v) => Rational(Ratio::from_integer(v)),
                None => overflow("addition"),
            };
        }
        Rational(self.0.checked_add(&rhs.0).unwrap_or_else(|| overflow("addition")))
    }
}

impl Sub for Rational {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_sub(rhs.numer()) {
                Some(v) => Rational(Ratio::from_integer(v)),
                None => overflow("subtraction"),
            };
        }
        Rational(self.0.checked_sub(&rhs.0).unwrap_or_else(|| overflow("subtraction")))
    }
}

impl Mul for Rational {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        if self.denom() == 1 && rhs.denom() == 1 {
            return match self.numer().checked_mul(rhs.numer()) {
                Some(v) => Rational(Ratio::from_integer(v)),
                None => overflow("multiplication"),
            };
        }
        Rational(self.0.checked_mul(&rhs.0).unwrap_or_else(|| overflow("multiplication")))
    }
}

impl Div for Rational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(self.0.checked_div(&rhs.0).unwrap_or_else(|| overflow("division")))
    }
}

impl Rem for Rational {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        Rational(self.0 % rhs.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Ratio::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Ratio::one())
    }
}

impl Num for Rational {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::Malformed("only radix 10 is supported".into()));
        }
        s.parse()
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(Ratio::from_integer(v as i128))
    }
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

impl Scalar for Rational {
    const FIELD: Field = Field::Rational;

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num as i128, den as i128)
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64()
    }

    fn conj(&self) -> Self {
        *self
    }

    fn parse_value(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap_or_default())),
            other => Err(Error::Malformed(format!(
                "exact rational values must be strings, got {other}"
            ))),
        }
    }

    fn to_value(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl RealScalar for Rational {
    type Complex = GaussianRational;

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn from_f64(x: f64) -> Self {
        Ratio::<i128>::approximate_float(x)
            .map(Rational)
            .unwrap_or_else(Rational::zero)
    }

    fn lift(self) -> GaussianRational {
        Complex::new(self, Rational::zero())
    }

    fn try_sqrt(&self) -> Option<Self> {
        let n = isqrt(self.numer())?;
        let d = isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals

fn format_gaussian(z: &GaussianRational) -> String {
    let (re, im) = (z.re, z.im);
    if im.is_zero() {
        return re.to_string();
    }
    let im_str = if im == Rational::one() {
        "i".to_string()
    } else if im == -Rational::one() {
        "-i".to_string()
    } else {
        format!("{im}i")
    };
    if re.is_zero() {
        im_str
    } else if im_str.starts_with('-') {
        format!("{re}{im_str}")
    } else {
        format!("{re}+{im_str}")
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational `a`, `b`.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Malformed("empty gaussian rational".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(t.parse()?, Rational::zero()));
    };
    // split the real part at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let im = match im_str {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => other.trim_start_matches('+').parse()?,
    };
    let re = if re_str.is_empty() {
        Rational::zero()
    } else {
        re_str.parse()?
    };
    Ok(Complex::new(re, im))
}

impl Scalar for GaussianRational {
    const FIELD: Field = Field::GaussianRational;

    fn from_rational(q: Rational) -> Self {
        Complex::new(q, Rational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(Rational::from_ratio(num, den), Rational::zero())
    }

    fn modulus(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn parse_value(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_gaussian(s),
            Value::Number(n) if n.is_i64() => Ok(Self::from_int(n.as_i64().unwrap_or_default())),
            other => Err(Error::Malformed(format!(
                "exact gaussian values must be strings, got {other}"
            ))),
        }
    }

    fn to_value(&self) -> Value {
        Value::String(format_gaussian(self))
    }
}

impl ComplexScalar for GaussianRational {
    type Real = Rational;

    fn new(re: Rational, im: Rational) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> Rational {
        self.re
    }
    fn im(&self) -> Rational {
        self.im
    }
}

// ---------------------------------------------------------------------------
// Floats

impl Scalar for f64 {
    const FIELD: Field = Field::F64;

    fn from_rational(q: Rational) -> Self {
        q.to_f64()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn conj(&self) -> Self {
        *self
    }

    fn parse_value(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Malformed(format!("invalid number {n}"))),
            Value::String(s) => {
                let r: Rational = s.parse()?;
                Ok(r.to_f64())
            }
            other => Err(Error::Malformed(format!("expected a number, got {other}"))),
        }
    }

    fn to_value(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

impl RealScalar for f64 {
    type Complex = C64;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn lift(self) -> C64 {
        Complex::new(self, 0.0)
    }

    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for C64 {
    const FIELD: Field = Field::C64;

    fn from_rational(q: Rational) -> Self {
        Complex::new(q.to_f64(), 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    /// A bare number is a real value; `[re, im]` is a complex one.
    fn parse_value(v: &Value) -> Result<Self> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(Complex::new(f64::parse_value(&parts[0])?, f64::parse_value(&parts[1])?))
            }
            other => Ok(Complex::new(f64::parse_value(other)?, 0.0)),
        }
    }

    fn to_value(&self) -> Value {
        Value::Array(vec![self.re.to_value(), self.im.to_value()])
    }
}

impl ComplexScalar for C64 {
    type Real = f64;

    fn new(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
}

/// `m!` with the convention `m! = 0` for negative `m`.
pub fn factorial(m: i64) -> i64 {
    if m < 0 {
        0
    } else {
        (1..=m).product()
    }
}
