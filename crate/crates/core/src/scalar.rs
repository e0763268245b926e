//! Field elements for the two arithmetic backends.
//!
//! Everything numerical in this crate is generic over [`Scalar`]. Two
//! implementations are provided:
//!
//! * [`Exact`]: complex numbers with arbitrary-precision rational parts. No
//!   rounding ever happens; `num` keeps every rational in lowest terms with a
//!   positive denominator, so equality is structural.
//! * [`Float`]: `Complex<f64>`. Comparisons against expected values always go
//!   through an explicit tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{One, Pow, ToPrimitive, Zero};
use num::{BigRational, Complex};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Exact rational complex numbers.
pub type Exact = Complex<BigRational>;

/// Double precision complex numbers.
pub type Float = Complex64;

/// Coefficients of modulus below this are treated as zero by the float
/// backend when computing effective degrees.
pub const DEGREE_EPSILON: f64 = 1e-11;

/// Which arithmetic a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// The exponent of the Dirichlet-type weight `(k+1)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::SpecValidation(format!("alpha must be finite, got {value}")));
        }
        Ok(Alpha(value))
    }

    /// Shorthand for integer exponents, which every backend accepts.
    pub fn int(value: i32) -> Self {
        Alpha(f64::from(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn as_integer(self) -> Option<i32> {
        if self.0.fract() == 0.0 && self.0.abs() <= f64::from(i32::MAX) {
            Some(self.0 as i32)
        } else {
            None
        }
    }

    pub fn is_hardy(self) -> bool {
        self.0 == 0.0
    }
}

/// A field element usable by every algorithm in the crate.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }
    fn from_rational(re: &BigRational, im: &BigRational) -> Self;
    /// The exact backend converts the binary value without rounding.
    fn from_f64_parts(re: f64, im: f64) -> Result<Self>;

    fn conj(&self) -> Self;
    /// `|z|^2` as a (real) element of the field.
    fn abs_sq(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact zero test (bitwise for floats; use [`Scalar::is_negligible`] for degree decisions).
    fn is_zero(&self) -> bool;
    /// Zero test used for degrees and pivots: exact equality, or modulus below
    /// [`DEGREE_EPSILON`] in the float backend.
    fn is_negligible(&self) -> bool;
    /// True when the value is in the real line (exactly for rationals).
    fn is_real(&self) -> bool;
    /// Strict comparison of real parts.
    fn real_gt(&self, other: &Self) -> bool;

    /// `(k+1)^alpha`.
    fn weight(k: usize, alpha: Alpha) -> Result<Self>;

    /// Solve `m x = rhs` for Hermitian positive definite `m`.
    fn solve_hermitian(m: &Matrix<Self>, rhs: &[Self]) -> Result<Vec<Self>>;
    fn determinant(m: &Matrix<Self>) -> Result<Self>;
}

/// `(k+1)^alpha` for `k = 0..len`.
pub fn weights<S: Scalar>(len: usize, alpha: Alpha) -> Result<Vec<S>> {
    (0..len).map(|k| S::weight(k, alpha)).collect()
}

/// Absolute closeness test for the float backend, equality for the exact one.
pub fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => a == b,
        Backend::Float => (a.to_c64() - b.to_c64()).norm() <= tol,
    }
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(value: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(value)), BigRational::zero())
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            BigRational::zero(),
        )
    }

    fn from_rational(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(re.clone(), im.clone())
    }

    fn from_f64_parts(re: f64, im: f64) -> Result<Self> {
        let conv = |v: f64| {
            BigRational::from_float(v).ok_or_else(|| Error::SpecValidation(format!("non-finite coefficient {v}")))
        };
        Ok(Complex::new(conv(re)?, conv(im)?))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn abs_sq(&self) -> Self {
        Complex::new(self.norm_sqr(), BigRational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_negligible(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn real_gt(&self, other: &Self) -> bool {
        self.re > other.re
    }

    fn weight(k: usize, alpha: Alpha) -> Result<Self> {
        let exponent = alpha.as_integer().ok_or_else(|| {
            Error::BackendMismatch(format!("exact backend needs an integer alpha, got {}", alpha.value()))
        })?;
        let base = BigRational::from_integer(BigInt::from(k + 1));
        let magnitude: BigRational = Pow::pow(&base, exponent.unsigned_abs());
        let value = if exponent.is_negative() {
            magnitude.recip()
        } else {
            magnitude
        };
        Ok(Complex::new(value, BigRational::zero()))
    }

    fn solve_hermitian(m: &Matrix<Self>, rhs: &[Self]) -> Result<Vec<Self>> {
        linalg::bareiss_solve(m, rhs).map(|(x, _)| x)
    }

    fn determinant(m: &Matrix<Self>) -> Result<Self> {
        Ok(linalg::bareiss_determinant(m))
    }
}

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }

    fn from_rational(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
    }

    fn from_f64_parts(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::SpecValidation(format!("non-finite coefficient {re}+{im}i")));
        }
        Ok(Complex64::new(re, im))
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn abs_sq(&self) -> Self {
        Complex64::new(self.norm_sqr(), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_negligible(&self) -> bool {
        self.norm() <= DEGREE_EPSILON
    }

    fn is_real(&self) -> bool {
        self.im == 0.0
    }

    fn real_gt(&self, other: &Self) -> bool {
        self.re > other.re
    }

    fn weight(k: usize, alpha: Alpha) -> Result<Self> {
        let base = (k + 1) as f64;
        let value = match alpha.as_integer() {
            Some(e) if e.abs() <= 64 => base.powi(e),
            _ => (alpha.value() * base.ln()).exp(),
        };
        Ok(Complex64::new(value, 0.0))
    }

    fn solve_hermitian(m: &Matrix<Self>, rhs: &[Self]) -> Result<Vec<Self>> {
        linalg::cholesky_solve(m, rhs)
    }

    fn determinant(m: &Matrix<Self>) -> Result<Self> {
        linalg::cholesky_determinant(m)
    }
}
