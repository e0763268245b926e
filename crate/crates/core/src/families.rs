//! The function families used throughout, and closed-form approximants for `(1 - z)^N`.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{One, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{Alpha, Backend, Exact, Float, Scalar};
use crate::series::Series;

pub const DEFAULT_BLASCHKE_TRUNCATION: usize = 10_000;
pub const DEFAULT_ETA_TRUNCATION: usize = 1_000_000;
pub const MIN_TRUNCATION: usize = 64;

/// Declarative description of `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `(1 - z)^N`.
    OneMinusZPow {
        n: u32,
    },
    /// `(1 + z)^N`.
    OnePlusZPow {
        n: u32,
    },
    /// `(lambda - z) / (1 - conj(lambda) z)`, truncated at degree `truncation`.
    Blaschke {
        lambda: Complex64,
        truncation: usize,
    },
    /// `(1 + z) / (1 - z)^eta`, truncated at degree `truncation`.
    Eta {
        eta: f64,
        truncation: usize,
    },
    Explicit {
        coeffs: Vec<Exact>,
    },
}

impl FunctionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            FunctionSpec::OneMinusZPow { .. } => "one_minus_z_pow",
            FunctionSpec::OnePlusZPow { .. } => "one_plus_z_pow",
            FunctionSpec::Blaschke { .. } => "blaschke",
            FunctionSpec::Eta { .. } => "eta_family",
            FunctionSpec::Explicit { .. } => "explicit",
        }
    }

    /// Whether the exact backend can represent the function.
    pub fn is_rational(&self) -> bool {
        matches!(
            self,
            FunctionSpec::OneMinusZPow { .. } | FunctionSpec::OnePlusZPow { .. } | FunctionSpec::Explicit { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::SpecValidation(msg));
        match self {
            FunctionSpec::OneMinusZPow { n } | FunctionSpec::OnePlusZPow { n } if *n < 1 => {
                fail(format!("{} needs N >= 1", self.name()))
            }
            FunctionSpec::Blaschke { lambda, truncation } => {
                if lambda.norm().is_nan() || lambda.norm() >= 1.0 || lambda.norm() == 0.0 {
                    return fail(format!("blaschke needs 0 < |lambda| < 1, got {lambda}"));
                }
                check_truncation(*truncation)
            }
            FunctionSpec::Eta { eta, truncation } => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return fail(format!("eta_family needs eta > 0, got {eta}"));
                }
                check_truncation(*truncation)
            }
            FunctionSpec::Explicit { coeffs } => {
                if coeffs.is_empty() {
                    return fail("explicit coefficients must be nonempty".into());
                }
                if Scalar::is_zero(&coeffs[0]) {
                    return fail("explicit coefficients need coeffs[0] != 0".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Coefficient vector of `f` in the backend `S`.
    pub fn realize<S: Scalar>(&self) -> Result<Series<S>> {
        self.validate()?;
        if S::BACKEND == Backend::Exact && !self.is_rational() {
            return Err(Error::BackendMismatch(format!(
                "{} is an infinite series; use the float backend",
                self.name()
            )));
        }
        match self {
            FunctionSpec::OneMinusZPow { n } => one_minus_z_pow(*n),
            FunctionSpec::OnePlusZPow { n } => one_plus_z_pow(*n),
            FunctionSpec::Blaschke { lambda, truncation } => {
                let lambda = S::from_f64_parts(lambda.re, lambda.im)?;
                blaschke(lambda, *truncation)
            }
            FunctionSpec::Eta { eta: e, truncation } => {
                let f = eta(*e, *truncation)?;
                Ok(f.map(|c| S::from_f64_parts(c.re, c.im).expect("finite coefficients")))
            }
            FunctionSpec::Explicit { coeffs } => Ok(Series::polynomial(
                coeffs.iter().map(|c| S::from_rational(&c.re, &c.im)).collect(),
            )),
        }
    }
}

fn check_truncation(m: usize) -> Result<()> {
    if m < MIN_TRUNCATION {
        return Err(Error::SpecValidation(format!(
            "truncation must be at least {MIN_TRUNCATION}, got {m}"
        )));
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn binomial_series<S: Scalar>(n: u32, sign: i64) -> Result<Series<S>> {
    if n < 1 {
        return Err(Error::SpecValidation("power must be at least 1".into()));
    }
    let coeffs = (0..=n)
        .map(|k| {
            let mut b = BigRational::from_integer(binomial(n, k));
            if sign < 0 && k % 2 == 1 {
                b = -b;
            }
            S::from_rational(&b, &BigRational::zero())
        })
        .collect();
    Ok(Series::polynomial(coeffs))
}

pub fn one_minus_z_pow<S: Scalar>(n: u32) -> Result<Series<S>> {
    binomial_series(n, -1)
}

pub fn one_plus_z_pow<S: Scalar>(n: u32) -> Result<Series<S>> {
    binomial_series(n, 1)
}

/// `lambda, (|lambda|^2 - 1) conj(lambda)^{k-1}` for `k = 1..=truncation`.
pub fn blaschke<S: Scalar>(lambda: S, truncation: usize) -> Result<Series<S>> {
    let m = lambda.modulus();
    if m.is_nan() || m >= 1.0 || lambda.is_zero() {
        return Err(Error::SpecValidation(format!(
            "blaschke needs 0 < |lambda| < 1, got {:?}",
            lambda.to_c64()
        )));
    }
    let mut coeffs = Vec::with_capacity(truncation + 1);
    coeffs.push(lambda.clone());
    let mut term = lambda.abs_sq() - S::one();
    let lc = lambda.conj();
    for _ in 1..=truncation {
        coeffs.push(term.clone());
        term = term * lc.clone();
    }
    Ok(Series::truncated(coeffs))
}

/// Coefficients of `(1 + z)(1 - z)^{-eta}` up to degree `truncation`.
pub fn eta(eta: f64, truncation: usize) -> Result<Series<Float>> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::SpecValidation(format!("eta_family needs eta > 0, got {eta}")));
    }
    let mut coeffs = Vec::with_capacity(truncation + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    let mut g_prev = 1.0f64;
    for k in 1..=truncation {
        let g = g_prev * (eta + k as f64 - 1.0) / k as f64;
        coeffs.push(Complex64::new(g + g_prev, 0.0));
        g_prev = g;
    }
    Ok(Series::truncated(coeffs))
}

fn inverse_weights<S: Scalar>(len: usize, alpha: Alpha) -> Result<Vec<S>> {
    (0..len).map(|k| Ok(S::one() / S::weight(k, alpha)?)).collect()
}

/// Optimal approximant to `1/(1 - z)`:
/// `c_k = (sum_{j=k+1}^{n+1} 1/w(j)) / (sum_{j=0}^{n+1} 1/w(j))`, `w(j) = (j+1)^alpha`.
pub fn cesaro_closed_form<S: Scalar>(n: usize, alpha: Alpha) -> Result<Series<S>> {
    let inv = inverse_weights::<S>(n + 2, alpha)?;
    let total = inv.iter().cloned().fold(S::zero(), |a, b| a + b);
    let mut tail = total.clone() - inv[0].clone();
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(tail.clone() / total.clone());
        tail = tail - inv[k + 1].clone();
    }
    Ok(Series::polynomial(coeffs))
}

/// Which quotient representation of the `1 - z` approximant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceForm {
    /// `(1 - sum_{k<=n+1} z^k/w(k) / sum_{k<=n+1} 1/w(k)) / (1 - z)`, any alpha.
    Quotient,
    /// `(z^{n+2} - (n+2) z + n + 1) / ((n+2)(1 - z)^2)`, Hardy space only.
    Hardy,
}

pub fn one_minus_z_reference<S: Scalar>(n: usize, alpha: Alpha, z: &S, form: ReferenceForm) -> Result<S> {
    let one = S::one();
    let f = one.clone() - z.clone();
    if f.is_zero() {
        return Err(Error::RemovableSingularity);
    }
    match form {
        ReferenceForm::Quotient => {
            let inv = inverse_weights::<S>(n + 2, alpha)?;
            let total = inv.iter().cloned().fold(S::zero(), |a, b| a + b);
            let partial = Series::polynomial(inv).eval(z);
            Ok((one - partial / total) / f)
        }
        ReferenceForm::Hardy => {
            if !alpha.is_hardy() {
                return Err(Error::UnsupportedAlpha {
                    alpha: alpha.value(),
                    operation: "one_minus_z_reference (Hardy form)",
                });
            }
            let m = S::from_i64(n as i64 + 2);
            let mut zp = one.clone();
            for _ in 0..n + 2 {
                zp = zp * z.clone();
            }
            let numer = zp - m.clone() * z.clone() + S::from_i64(n as i64 + 1);
            Ok(numer / (m * f.clone() * f))
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `B(a, b) = (a-1)! (b-1)! / (a+b-1)!` for positive integers.
fn beta(a: u32, b: u32) -> BigRational {
    BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
}

/// Optimal approximants to `1/(1 - z)^N` in the Hardy space:
/// `c_k = C(k+N-1, k) B(n+N+1, N) / B(n-k+1, N)`.
pub fn hardy_power_closed_form<S: Scalar>(big_n: u32, n: usize) -> Result<Series<S>> {
    if big_n < 1 {
        return Err(Error::SpecValidation("N must be at least 1".into()));
    }
    let n = n as u32;
    let top = beta(n + big_n + 1, big_n);
    let coeffs = (0..=n)
        .map(|k| {
            let c = BigRational::from_integer(binomial(k + big_n - 1, k)) * top.clone() / beta(n - k + 1, big_n);
            S::from_rational(&c, &BigRational::zero())
        })
        .collect();
    Ok(Series::polynomial(coeffs))
}
